#pragma once

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "usersim/dialogue.h"
#include "usersim/domain.h"

namespace usersim::agenda {

// Pseudo-states of the user-intent Markov chain.
inline constexpr std::string_view kStartState = "START";
inline constexpr std::string_view kEndState = "END";

// First-order chain over user intents. Rows are keyed by START or a user
// intent label; targets are user intent labels or END.
class TransitionTable {
 public:
  using Row = std::map<std::string, double>;

  void SetRow(std::string state, Row row);
  // Empty row when the state is unknown.
  const Row& RowFor(std::string_view state) const;
  const std::map<std::string, Row, std::less<>>& rows() const { return rows_; }
  bool empty() const { return rows_.empty(); }

  // Throws Error(kInvalidConfig) unless every row is non-negative and sums
  // to 1 within 1e-9.
  void Validate() const;

  friend bool operator==(const TransitionTable&, const TransitionTable&) = default;

 private:
  std::map<std::string, Row, std::less<>> rows_;
};

// User and agent intent spaces plus, per user intent, which agent responses
// count as expected. Also carries the learned transition table.
struct InteractionModel {
  std::string name = "crsv1";
  std::vector<Intent> user_intents;
  std::vector<Intent> agent_intents;
  std::map<Intent, std::set<Intent>> expected_responses;
  std::map<Intent, std::vector<std::string>> required_slots;
  Intent terminal_intent{"DONE"};
  Intent accept_intent{"ACCEPT"};
  Intent reject_intent{"REJECT"};
  std::set<Intent> recommend_intents{Intent("RECOMMEND")};
  // NLG fallback patterns per user intent; `{slot}` expands to the slots
  // that must be voiced.
  std::map<std::string, std::string> default_templates;
  TransitionTable transitions;

  bool IsUserIntent(const Intent& intent) const;
  bool IsAgentIntent(const Intent& intent) const;
  bool IsExpected(const Intent& user_intent, const Intent& agent_intent) const;
  bool IsRecommendation(const Intent& agent_intent) const;
  const std::vector<std::string>& RequiredSlots(const Intent& user_intent) const;
};

// Config document (JSON):
//
//   {
//     "name": "crsv1",
//     "user_intents": {"DISCLOSE": {"required_slots": ["genre"]}, ...},
//     "agent_intents": ["WELCOME", ...],
//     "expected_responses": {"DISCLOSE": ["ELICIT", "RECOMMEND"], ...},
//     "terminal_intent": "DONE",
//     "accept_intent": "ACCEPT", "reject_intent": "REJECT",
//     "recommend_intents": ["RECOMMEND"],
//     "default_templates": {"DISCLOSE": "I am looking for {slot}."}
//   }
//
// Errors: kUnknownIntent for expected_responses naming undeclared intents,
// kNoTerminalIntent when the terminal intent is missing or undeclared,
// kUnknownSlot for required slots outside `domain`, kInvalidConfig for
// other structural problems. An optional "transitions" table is accepted
// so a trained model can be reloaded.
InteractionModel ParseInteractionModel(const nlohmann::json& j, const Domain& domain);
InteractionModel LoadInteractionModel(const std::filesystem::path& path,
                                      const Domain& domain);
nlohmann::json InteractionModelToJson(const InteractionModel& model);

// Counts first-order transitions over each dialogue's annotated user-intent
// sequence, with START before the first intent and END after the last.
// Every row of START and every user intent is add-one smoothed over its
// observed support plus END, then normalized.
//
// Throws Error(kEmptyTrainingSet) for an empty sample and
// Error(kUnknownIntent) for user intents outside the model.
InteractionModel LearnTransitions(const std::vector<Dialogue>& sample,
                                  InteractionModel model);

}  // namespace usersim::agenda
