#include "usersim/transcript.h"

#include <fstream>
#include <sstream>

#include "usersim/error.h"

namespace usersim {

using nlohmann::json;

namespace {

json UtteranceToJson(const Utterance& u) {
  json j;
  j["participant"] = ParticipantName(u.participant);
  j["text"] = u.text;
  j["turn_index"] = u.turn_index;
  if (u.intent) j["intent"] = u.intent->label();
  if (u.intent || !u.slot_values.empty()) {
    json slots = json::array();
    for (const auto& sv : u.slot_values)
      slots.push_back({{"slot", sv.slot}, {"value", sv.value}});
    j["slot_values"] = std::move(slots);
  }
  if (u.satisfaction) j["satisfaction"] = *u.satisfaction;
  return j;
}

Utterance UtteranceFromJson(const json& j) {
  Utterance u;
  auto participant = ParseParticipant(j.at("participant").get<std::string>());
  if (!participant)
    throw Error(ErrorCode::kMalformedDocument,
                "unknown participant '" + j.at("participant").get<std::string>() + "'");
  u.participant = *participant;
  u.text = j.at("text").get<std::string>();
  u.turn_index = j.at("turn_index").get<int>();
  if (auto it = j.find("intent"); it != j.end())
    u.intent = Intent(it->get<std::string>());
  if (auto it = j.find("slot_values"); it != j.end()) {
    for (const auto& sv : *it)
      u.slot_values.push_back(
          {sv.at("slot").get<std::string>(), sv.at("value").get<std::string>()});
  }
  if (auto it = j.find("satisfaction"); it != j.end())
    u.satisfaction = it->get<int>();
  return u;
}

}  // namespace

json DialogueToJson(const Dialogue& d) {
  json utterances = json::array();
  for (const auto& u : d.utterances) utterances.push_back(UtteranceToJson(u));
  return {{"dialogue_id", d.dialogue_id},
          {"agent_id", d.agent_id},
          {"user_id", d.user_id},
          {"metadata", d.metadata},
          {"utterances", std::move(utterances)}};
}

Dialogue DialogueFromJson(const json& j) {
  Dialogue d;
  try {
    d.dialogue_id = j.at("dialogue_id").get<std::string>();
    d.agent_id = j.value("agent_id", std::string());
    d.user_id = j.value("user_id", std::string());
    if (auto it = j.find("metadata"); it != j.end())
      d.metadata = it->get<std::map<std::string, std::string>>();
    for (const auto& u : j.at("utterances")) d.utterances.push_back(UtteranceFromJson(u));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kMalformedDocument, e.what());
  }
  ValidateDialogue(d);
  return d;
}

void ExportDialogues(std::span<const Dialogue> dialogues, std::ostream& out) {
  json list = json::array();
  for (const auto& d : dialogues) list.push_back(DialogueToJson(d));
  json doc = {{"schema_version", kTranscriptSchemaVersion},
              {"dialogues", std::move(list)}};
  out << doc.dump(2) << '\n';
}

std::string ExportDialogues(std::span<const Dialogue> dialogues) {
  std::ostringstream out;
  ExportDialogues(dialogues, out);
  return out.str();
}

void ExportDialogues(std::span<const Dialogue> dialogues,
                     const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  ExportDialogues(dialogues, out);
}

std::vector<Dialogue> ImportDialogues(std::istream& in) {
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kMalformedDocument, e.what());
  }
  if (!doc.is_object() || !doc.contains("schema_version") ||
      !doc.contains("dialogues") || !doc["dialogues"].is_array())
    throw Error(ErrorCode::kMalformedDocument,
                "expected {schema_version, dialogues:[...]}");
  if (!doc["schema_version"].is_number_integer() ||
      doc["schema_version"].get<int>() != kTranscriptSchemaVersion)
    throw Error(ErrorCode::kSchemaVersionMismatch,
                "transcript schema_version " + doc["schema_version"].dump() +
                    ", expected " + std::to_string(kTranscriptSchemaVersion));
  std::vector<Dialogue> dialogues;
  for (const auto& d : doc["dialogues"]) dialogues.push_back(DialogueFromJson(d));
  return dialogues;
}

std::vector<Dialogue> ImportDialoguesFromString(const std::string& text) {
  std::istringstream in(text);
  return ImportDialogues(in);
}

std::vector<Dialogue> ImportDialogues(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  return ImportDialogues(in);
}

}  // namespace usersim
