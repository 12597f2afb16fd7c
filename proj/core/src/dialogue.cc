#include "usersim/dialogue.h"

#include "usersim/error.h"

namespace usersim {

std::string_view ParticipantName(Participant p) {
  return p == Participant::kUser ? "USER" : "AGENT";
}

std::optional<Participant> ParseParticipant(std::string_view name) {
  if (name == "USER") return Participant::kUser;
  if (name == "AGENT") return Participant::kAgent;
  return std::nullopt;
}

std::size_t Dialogue::CountUtterances(Participant p) const {
  std::size_t n = 0;
  for (const auto& u : utterances) n += u.participant == p;
  return n;
}

void ValidateDialogue(const Dialogue& dialogue) {
  auto fail = [&](const std::string& why) {
    throw Error(ErrorCode::kInvalidDialogue,
                "dialogue '" + dialogue.dialogue_id + "': " + why);
  };
  if (dialogue.dialogue_id.empty()) fail("empty dialogue_id");
  for (std::size_t i = 0; i < dialogue.utterances.size(); ++i) {
    const Utterance& u = dialogue.utterances[i];
    if (u.turn_index < 0) fail("negative turn_index");
    if (i > 0) {
      const Utterance& prev = dialogue.utterances[i - 1];
      if (u.turn_index <= prev.turn_index)
        fail("turn_index not strictly increasing at position " +
             std::to_string(i));
      if (u.participant == prev.participant)
        fail("participants do not alternate at position " + std::to_string(i));
    }
    if (u.satisfaction) {
      if (u.participant != Participant::kUser)
        fail("satisfaction on an agent utterance");
      if (*u.satisfaction < 1 || *u.satisfaction > 5)
        fail("satisfaction outside [1,5]");
    }
    if (u.intent && u.intent->empty()) fail("empty intent label");
  }
  if (auto it = dialogue.metadata.find(std::string(metadata_keys::kOutcome));
      it != dialogue.metadata.end() && it->second != "SUCCESS" &&
      it->second != "FAILURE") {
    fail("outcome must be SUCCESS or FAILURE, got '" + it->second + "'");
  }
}

}  // namespace usersim
