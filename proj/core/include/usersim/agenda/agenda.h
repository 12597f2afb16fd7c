#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "usersim/agenda/interaction_model.h"
#include "usersim/dialogue.h"
#include "usersim/rng.h"
#include "usersim/user/context.h"

namespace usersim::agenda {

inline constexpr std::size_t kDefaultAgendaCap = 20;

// Stack of pending user intents.
class Agenda {
 public:
  Agenda() = default;
  // `top_first[0]` ends up on top.
  explicit Agenda(const std::vector<Intent>& top_first);

  bool empty() const { return stack_.empty(); }
  std::size_t size() const { return stack_.size(); }
  const Intent& Top() const { return stack_.back(); }
  Intent Pop();
  void Push(Intent intent) { stack_.push_back(std::move(intent)); }
  std::vector<Intent> Items() const;  // top first

  std::optional<Intent> last_action;
  int consecutive_unexpected = 0;

 private:
  std::vector<Intent> stack_;  // back() is the top
};

// Random walk from START until END is drawn or cap - 1 intents have been
// emitted; the terminal intent is appended unless the walk already ended
// on it. The first intent drawn ends up on top.
Agenda InitializeAgenda(const InteractionModel& model, Rng& rng,
                        std::size_t cap = kDefaultAgendaCap);

enum class ActionBranch { kPulled, kRepeated, kSampled, kQuit };

std::string_view ToString(ActionBranch branch);

struct UserAction {
  Intent intent;
  user::SatisfactionEvent event = user::SatisfactionEvent::kExpectedResponse;
  ActionBranch branch = ActionBranch::kPulled;
};

// One agenda update.
//
// Expected agent response (or no previous user action yet): pop the top of
// the stack, or the terminal intent when the stack is empty. The rng is not
// touched.
//
// Unexpected response: bump consecutive_unexpected; once it reaches the
// persona's patience, quit with the terminal intent. Otherwise repeat the
// previous action with probability `cooperativeness`, else draw a
// replacement from the previous action's transition row with END masked
// out (nothing is pushed). A row with no non-END mass falls back to
// repeating.
//
// The returned intent becomes agenda.last_action.
UserAction NextUserAction(Agenda& agenda, const Intent& agent_intent,
                          const InteractionModel& model, const user::Persona& persona,
                          const user::ContextState& context, Rng& rng);

}  // namespace usersim::agenda
