#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "usersim/agenda/agenda.h"
#include "usersim/agenda/interaction_model.h"
#include "usersim/connector.h"
#include "usersim/domain.h"
#include "usersim/items.h"
#include "usersim/nlg/template_store.h"
#include "usersim/nlu/intent_classifier.h"
#include "usersim/nlu/slot_extractor.h"
#include "usersim/rng.h"
#include "usersim/user/population.h"

namespace usersim::agenda {

// Everything a simulated user needs that does not change during a run.
// Shared read-only between sessions.
struct SimulatorModels {
  Domain domain;
  ItemCollection items;
  InteractionModel interaction;
  nlu::IntentModel agent_intents;  // over lexicon-delexicalized text
  nlu::ExtractionLexicon lexicon;
  nlg::TemplateStore templates;
};

struct SimulatorOptions {
  std::size_t agenda_cap = kDefaultAgendaCap;
};

// Per-turn record of how the simulator arrived at its utterance.
struct TurnTrace {
  Intent agent_intent;
  double agent_similarity = 0.0;
  Intent user_intent;
  ActionBranch branch = ActionBranch::kPulled;
  int satisfaction = 3;
  int template_stage = 0;
  nlg::SatisfactionBucket template_bucket = nlg::SatisfactionBucket::kAny;
  std::vector<SlotValue> slot_values;
};

// Agenda-based simulated user. One instance per dialogue session.
//
// Each turn: classify the agent utterance and extract its slots, react to
// recommendations using the preference graph, update the agenda, update
// satisfaction, fill the slots the chosen intent needs from the preference
// graph and render a template chosen under the current context.
class SimulatedUser : public DialogueParticipant {
 public:
  SimulatedUser(std::shared_ptr<const SimulatorModels> models, user::UserProfile profile,
                SimulatorOptions options = {});

  std::string id() const override { return profile_.user_id; }
  // The user never opens a conversation; behaves like Respond("").
  Reply Open() override;
  Reply Respond(std::string_view agent_utterance) override;

  const user::UserProfile& profile() const { return profile_; }
  const Agenda& agenda() const { return agenda_; }
  const std::vector<TurnTrace>& trace() const { return trace_; }

 private:
  struct Filled {
    std::map<std::string, std::string> values;
    std::vector<SlotValue> ordered;
    std::optional<double> first_weight;
  };

  std::set<std::string> SlotsToVoice(const Intent& intent,
                                     const std::vector<std::string>& elicited) const;
  std::optional<std::pair<std::string, double>> ChooseValue(const std::string& slot);
  void FillSlot(const std::string& slot, Filled& filled);

  std::shared_ptr<const SimulatorModels> models_;
  user::UserProfile profile_;
  SimulatorOptions options_;
  Rng rng_;
  Agenda agenda_;
  std::vector<TurnTrace> trace_;
  std::set<std::pair<std::string, std::string>> disclosed_;
  std::vector<SlotValue> last_slot_values_;
  std::optional<std::string> last_recommended_title_;
  bool finished_ = false;
};

}  // namespace usersim::agenda
