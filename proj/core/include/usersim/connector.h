#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "usersim/dialogue.h"
#include "usersim/error.h"

namespace usersim {

// What a participant says next. A reply with `terminate` set ends the
// dialogue; its text is stored first unless it is empty.
struct Reply {
  std::string text;
  bool terminate = false;
  std::optional<Intent> intent;
  std::vector<SlotValue> slot_values;
  std::optional<int> satisfaction;
};

// Anything that can hold one side of a conversation: a simulated user, an
// in-process agent, a remote agent behind the wire protocol, a human.
// Implementations signal transport-level failure by throwing Error with
// kTransportError or kProtocolError.
class DialogueParticipant {
 public:
  virtual ~DialogueParticipant() = default;

  virtual std::string id() const = 0;
  // Called once on the agent to open the conversation.
  virtual Reply Open() = 0;
  virtual Reply Respond(std::string_view utterance) = 0;
};

struct ConnectOptions {
  std::string dialogue_id;
  int max_turns = 30;
};

// Runs one conversation to completion. The agent speaks first; the dialogue
// ends when either side terminates or `max_turns` user utterances have been
// produced. metadata["terminated_by"] is one of user, agent, max_turns or
// aborted. A transport or protocol failure stops the dialogue, which is
// returned as-is with aborted=true and the failure in abort_cause.
Dialogue ConnectDialogue(DialogueParticipant& user, DialogueParticipant& agent,
                         const ConnectOptions& options);

}  // namespace usersim
