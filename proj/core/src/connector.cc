#include "usersim/connector.h"

namespace usersim {
namespace {

void Append(Dialogue& dialogue, Participant who, Reply reply) {
  Utterance u;
  u.participant = who;
  u.text = std::move(reply.text);
  u.turn_index = static_cast<int>(dialogue.utterances.size());
  u.intent = std::move(reply.intent);
  u.slot_values = std::move(reply.slot_values);
  if (who == Participant::kUser) u.satisfaction = reply.satisfaction;
  dialogue.utterances.push_back(std::move(u));
}

}  // namespace

Dialogue ConnectDialogue(DialogueParticipant& user, DialogueParticipant& agent,
                         const ConnectOptions& options) {
  Dialogue dialogue;
  dialogue.dialogue_id = options.dialogue_id;
  dialogue.agent_id = agent.id();
  dialogue.user_id = user.id();
  auto& meta = dialogue.metadata;
  auto finish = [&](std::string_view cause) {
    meta[std::string(metadata_keys::kTerminatedBy)] = std::string(cause);
  };

  try {
    Reply agent_reply = agent.Open();
    int user_turns = 0;
    while (true) {
      bool agent_done = agent_reply.terminate;
      std::string agent_text = agent_reply.text;
      if (!agent_reply.text.empty() || !agent_done)
        Append(dialogue, Participant::kAgent, std::move(agent_reply));
      if (agent_done) {
        finish("agent");
        break;
      }

      Reply user_reply = user.Respond(agent_text);
      bool user_done = user_reply.terminate;
      if (!user_reply.text.empty() || !user_done) {
        Append(dialogue, Participant::kUser, std::move(user_reply));
        ++user_turns;
      }
      if (user_done) {
        finish("user");
        break;
      }
      if (user_turns >= options.max_turns) {
        finish("max_turns");
        break;
      }
      agent_reply = agent.Respond(dialogue.utterances.back().text);
    }
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kTransportError &&
        e.code() != ErrorCode::kProtocolError)
      throw;
    meta[std::string(metadata_keys::kAborted)] = "true";
    meta[std::string(metadata_keys::kAbortCause)] = e.what();
    finish("aborted");
  }
  return dialogue;
}

}  // namespace usersim
