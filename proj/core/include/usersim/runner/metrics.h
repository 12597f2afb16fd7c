#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "usersim/dialogue.h"

namespace usersim::runner {

struct DialogueMetrics {
  std::string dialogue_id;
  int turns = 0;
  bool success = false;
  std::string termination_cause;
};

struct MetricsReport {
  int n_dialogues = 0;
  double avg_turns = 0.0;
  double avg_success = 0.0;
  std::vector<DialogueMetrics> rows;

  nlohmann::json ToJson() const;
};

// turns = number of USER utterances; success = some USER utterance carries
// `accept_intent`. Throws Error(kNoDialogues) on an empty set.
MetricsReport Evaluate(const std::vector<Dialogue>& dialogues,
                       const Intent& accept_intent = Intent("ACCEPT"));

}  // namespace usersim::runner
