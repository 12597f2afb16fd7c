#include "usersim/agenda/agenda.h"

#include <algorithm>

namespace usersim::agenda {

Agenda::Agenda(const std::vector<Intent>& top_first)
    : stack_(top_first.rbegin(), top_first.rend()) {}

Intent Agenda::Pop() {
  Intent top = std::move(stack_.back());
  stack_.pop_back();
  return top;
}

std::vector<Intent> Agenda::Items() const {
  return std::vector<Intent>(stack_.rbegin(), stack_.rend());
}

namespace {

// Draws a target from `row`, optionally ignoring END. Returns nullopt when
// nothing has mass.
std::optional<std::string> DrawFromRow(const TransitionTable::Row& row, Rng& rng,
                                       bool mask_end) {
  std::vector<const std::string*> targets;
  std::vector<double> weights;
  for (const auto& [target, p] : row) {
    if (mask_end && target == kEndState) continue;
    targets.push_back(&target);
    weights.push_back(p);
  }
  std::size_t i = rng.Categorical(weights);
  if (i >= targets.size()) return std::nullopt;
  return *targets[i];
}

}  // namespace

Agenda InitializeAgenda(const InteractionModel& model, Rng& rng, std::size_t cap) {
  cap = std::max<std::size_t>(cap, 1);
  std::vector<Intent> walk;
  std::string state(kStartState);
  while (walk.size() + 1 < cap) {
    auto next = DrawFromRow(model.transitions.RowFor(state), rng, /*mask_end=*/false);
    if (!next || *next == kEndState) break;
    walk.emplace_back(*next);
    state = *next;
  }
  if (walk.empty() || walk.back() != model.terminal_intent)
    walk.push_back(model.terminal_intent);
  return Agenda(walk);
}

std::string_view ToString(ActionBranch branch) {
  switch (branch) {
    case ActionBranch::kPulled: return "pulled";
    case ActionBranch::kRepeated: return "repeated";
    case ActionBranch::kSampled: return "sampled";
    case ActionBranch::kQuit: return "quit";
  }
  return "";
}

UserAction NextUserAction(Agenda& agenda, const Intent& agent_intent,
                          const InteractionModel& model, const user::Persona& persona,
                          [[maybe_unused]] const user::ContextState& context, Rng& rng) {
  UserAction action;
  bool expected =
      !agenda.last_action || model.IsExpected(*agenda.last_action, agent_intent);
  if (expected) {
    agenda.consecutive_unexpected = 0;
    action.event = user::SatisfactionEvent::kExpectedResponse;
    action.branch = ActionBranch::kPulled;
    action.intent = agenda.empty() ? model.terminal_intent : agenda.Pop();
  } else {
    ++agenda.consecutive_unexpected;
    action.event = user::SatisfactionEvent::kUnexpectedResponse;
    if (agenda.consecutive_unexpected >= persona.patience) {
      action.branch = ActionBranch::kQuit;
      action.intent = model.terminal_intent;
    } else if (rng.Uniform01() < persona.cooperativeness) {
      action.branch = ActionBranch::kRepeated;
      action.intent = *agenda.last_action;
    } else {
      auto replacement = DrawFromRow(
          model.transitions.RowFor(agenda.last_action->label()), rng, /*mask_end=*/true);
      if (replacement) {
        action.branch = ActionBranch::kSampled;
        action.intent = Intent(*replacement);
      } else {
        action.branch = ActionBranch::kRepeated;
        action.intent = *agenda.last_action;
      }
    }
  }
  agenda.last_action = action.intent;
  return action;
}

}  // namespace usersim::agenda
