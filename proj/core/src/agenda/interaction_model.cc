#include "usersim/agenda/interaction_model.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <tuple>

#include "usersim/error.h"

namespace usersim::agenda {

using nlohmann::json;

void TransitionTable::SetRow(std::string state, Row row) {
  rows_[std::move(state)] = std::move(row);
}

const TransitionTable::Row& TransitionTable::RowFor(std::string_view state) const {
  static const Row kEmpty;
  auto it = rows_.find(state);
  return it == rows_.end() ? kEmpty : it->second;
}

void TransitionTable::Validate() const {
  for (const auto& [state, row] : rows_) {
    double total = 0.0;
    for (const auto& [target, p] : row) {
      if (!(p >= 0.0))
        throw Error(ErrorCode::kInvalidConfig,
                    "negative transition probability " + state + " -> " + target);
      total += p;
    }
    if (std::abs(total - 1.0) > 1e-9)
      throw Error(ErrorCode::kInvalidConfig,
                  "transition row '" + state + "' sums to " + std::to_string(total));
  }
}

bool InteractionModel::IsUserIntent(const Intent& intent) const {
  return std::find(user_intents.begin(), user_intents.end(), intent) != user_intents.end();
}

bool InteractionModel::IsAgentIntent(const Intent& intent) const {
  return std::find(agent_intents.begin(), agent_intents.end(), intent) !=
         agent_intents.end();
}

bool InteractionModel::IsExpected(const Intent& user_intent,
                                  const Intent& agent_intent) const {
  auto it = expected_responses.find(user_intent);
  return it != expected_responses.end() && it->second.contains(agent_intent);
}

bool InteractionModel::IsRecommendation(const Intent& agent_intent) const {
  return recommend_intents.contains(agent_intent);
}

const std::vector<std::string>& InteractionModel::RequiredSlots(
    const Intent& user_intent) const {
  static const std::vector<std::string> kNone;
  auto it = required_slots.find(user_intent);
  return it == required_slots.end() ? kNone : it->second;
}

namespace {

struct UtteranceListLess {
  static auto Key(const Utterance& u) {
    return std::tie(u.participant, u.text, u.turn_index, u.intent, u.slot_values,
                    u.satisfaction);
  }
  bool operator()(const std::vector<Utterance>& a, const std::vector<Utterance>& b) const {
    return std::lexicographical_compare(
        a.begin(), a.end(), b.begin(), b.end(),
        [](const Utterance& x, const Utterance& y) { return Key(x) < Key(y); });
  }
};

std::vector<Intent> IntentList(const json& j, const char* field) {
  if (!j.is_array())
    throw Error(ErrorCode::kInvalidConfig, std::string("'") + field + "' must be a list");
  std::vector<Intent> out;
  for (const auto& v : j) out.emplace_back(v.get<std::string>());
  return out;
}

void CheckReserved(const Intent& intent) {
  if (intent.label() == kStartState || intent.label() == kEndState || intent.empty())
    throw Error(ErrorCode::kInvalidConfig,
                "'" + intent.label() + "' is not a valid user intent label");
}

}  // namespace

InteractionModel ParseInteractionModel(const json& j, const Domain& domain) {
  InteractionModel m;
  m.default_templates.clear();
  try {
    m.name = j.value("name", std::string("crsv1"));
    if (!j.contains("user_intents"))
      throw Error(ErrorCode::kInvalidConfig, "missing 'user_intents'");
    const json& users = j.at("user_intents");
    if (users.is_object()) {
      for (const auto& [label, spec] : users.items()) {
        Intent intent(label);
        CheckReserved(intent);
        m.user_intents.push_back(intent);
        if (spec.is_object() && spec.contains("required_slots")) {
          auto slots = spec.at("required_slots").get<std::vector<std::string>>();
          for (const auto& s : slots)
            if (!domain.HasSlot(s))
              throw Error(ErrorCode::kUnknownSlot, "required slot '" + s + "' of " +
                                                       label + " is not a domain slot");
          m.required_slots[intent] = std::move(slots);
        }
      }
    } else {
      m.user_intents = IntentList(users, "user_intents");
      for (const auto& i : m.user_intents) CheckReserved(i);
    }
    m.agent_intents = IntentList(j.at("agent_intents"), "agent_intents");

    if (!j.contains("terminal_intent"))
      throw Error(ErrorCode::kNoTerminalIntent, "missing 'terminal_intent'");
    m.terminal_intent = Intent(j.at("terminal_intent").get<std::string>());
    if (!m.IsUserIntent(m.terminal_intent))
      throw Error(ErrorCode::kNoTerminalIntent, "terminal intent '" +
                                                    m.terminal_intent.label() +
                                                    "' is not a declared user intent");
    m.accept_intent = Intent(j.value("accept_intent", std::string("ACCEPT")));
    m.reject_intent = Intent(j.value("reject_intent", std::string("REJECT")));
    for (const auto* marker : {&m.accept_intent, &m.reject_intent})
      if (!m.IsUserIntent(*marker))
        throw Error(ErrorCode::kUnknownIntent,
                    "marker intent '" + marker->label() + "' is not a declared user intent");
    if (j.contains("recommend_intents")) {
      m.recommend_intents.clear();
      for (const auto& i : IntentList(j.at("recommend_intents"), "recommend_intents")) {
        if (!m.IsAgentIntent(i))
          throw Error(ErrorCode::kUnknownIntent,
                      "recommend intent '" + i.label() + "' is not a declared agent intent");
        m.recommend_intents.insert(i);
      }
    }

    if (j.contains("expected_responses")) {
      for (const auto& [label, responses] : j.at("expected_responses").items()) {
        Intent user_intent(label);
        if (!m.IsUserIntent(user_intent))
          throw Error(ErrorCode::kUnknownIntent,
                      "expected_responses names undeclared user intent '" + label + "'");
        auto& set = m.expected_responses[user_intent];
        for (const auto& r : IntentList(responses, "expected_responses")) {
          if (!m.IsAgentIntent(r))
            throw Error(ErrorCode::kUnknownIntent,
                        "expected_responses names undeclared agent intent '" +
                            r.label() + "'");
          set.insert(r);
        }
      }
    }

    if (j.contains("default_templates"))
      m.default_templates =
          j.at("default_templates").get<std::map<std::string, std::string>>();

    if (j.contains("transitions")) {
      for (const auto& [state, row] : j.at("transitions").items())
        m.transitions.SetRow(state, row.get<TransitionTable::Row>());
      m.transitions.Validate();
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kInvalidConfig, std::string("interaction model: ") + e.what());
  }
  return m;
}

InteractionModel LoadInteractionModel(const std::filesystem::path& path,
                                      const Domain& domain) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kMalformedDocument, path.string() + ": " + e.what());
  }
  return ParseInteractionModel(j, domain);
}

json InteractionModelToJson(const InteractionModel& m) {
  json users = json::object();
  for (const auto& i : m.user_intents) {
    json spec = json::object();
    if (auto it = m.required_slots.find(i); it != m.required_slots.end())
      spec["required_slots"] = it->second;
    users[i.label()] = spec;
  }
  json agents = json::array();
  for (const auto& i : m.agent_intents) agents.push_back(i.label());
  json expected = json::object();
  for (const auto& [u, set] : m.expected_responses) {
    json list = json::array();
    for (const auto& a : set) list.push_back(a.label());
    expected[u.label()] = list;
  }
  json recommend = json::array();
  for (const auto& r : m.recommend_intents) recommend.push_back(r.label());
  json j = {{"name", m.name},
            {"user_intents", users},
            {"agent_intents", agents},
            {"expected_responses", expected},
            {"terminal_intent", m.terminal_intent.label()},
            {"accept_intent", m.accept_intent.label()},
            {"reject_intent", m.reject_intent.label()},
            {"recommend_intents", recommend},
            {"default_templates", m.default_templates}};
  if (!m.transitions.empty()) {
    json rows = json::object();
    for (const auto& [state, row] : m.transitions.rows()) rows[state] = row;
    j["transitions"] = rows;
  }
  return j;
}

InteractionModel LearnTransitions(const std::vector<Dialogue>& sample,
                                  InteractionModel model) {
  if (sample.empty())
    throw Error(ErrorCode::kEmptyTrainingSet, "no dialogues to learn transitions from");

  // Verbatim duplicates of a dialogue are counted once, so replicating the
  // sample does not sharpen the smoothed rows.
  std::set<std::vector<Utterance>, UtteranceListLess> seen;
  std::map<std::string, std::map<std::string, int>> counts;
  for (const auto& d : sample) {
    if (!seen.insert(d.utterances).second) continue;
    std::string previous(kStartState);
    bool any = false;
    for (const auto& u : d.utterances) {
      if (u.participant != Participant::kUser || !u.intent) continue;
      if (!model.IsUserIntent(*u.intent))
        throw Error(ErrorCode::kUnknownIntent, "dialogue '" + d.dialogue_id +
                                                   "' uses user intent '" +
                                                   u.intent->label() +
                                                   "' absent from the interaction model");
      ++counts[previous][u.intent->label()];
      previous = u.intent->label();
      any = true;
    }
    if (any) ++counts[previous][std::string(kEndState)];
  }

  TransitionTable table;
  std::vector<std::string> states{std::string(kStartState)};
  for (const auto& i : model.user_intents) states.push_back(i.label());
  for (const auto& state : states) {
    TransitionTable::Row smoothed;
    for (const auto& [target, c] : counts[state]) smoothed[target] = c + 1.0;
    smoothed.try_emplace(std::string(kEndState), 1.0);
    double total = 0.0;
    for (const auto& [_, c] : smoothed) total += c;
    for (auto& [_, c] : smoothed) c /= total;
    table.SetRow(state, std::move(smoothed));
  }
  model.transitions = std::move(table);
  return model;
}

}  // namespace usersim::agenda
