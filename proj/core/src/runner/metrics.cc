#include "usersim/runner/metrics.h"

#include "usersim/error.h"

namespace usersim::runner {

using nlohmann::json;

MetricsReport Evaluate(const std::vector<Dialogue>& dialogues, const Intent& accept_intent) {
  if (dialogues.empty()) throw Error(ErrorCode::kNoDialogues, "nothing to evaluate");
  MetricsReport report;
  double turns_sum = 0.0;
  double success_sum = 0.0;
  for (const auto& d : dialogues) {
    DialogueMetrics row;
    row.dialogue_id = d.dialogue_id;
    for (const auto& u : d.utterances) {
      if (u.participant != Participant::kUser) continue;
      ++row.turns;
      if (u.intent == accept_intent) row.success = true;
    }
    if (auto it = d.metadata.find(std::string(metadata_keys::kTerminatedBy));
        it != d.metadata.end())
      row.termination_cause = it->second;
    turns_sum += row.turns;
    success_sum += row.success ? 1.0 : 0.0;
    report.rows.push_back(std::move(row));
  }
  report.n_dialogues = static_cast<int>(dialogues.size());
  report.avg_turns = turns_sum / report.n_dialogues;
  report.avg_success = success_sum / report.n_dialogues;
  return report;
}

json MetricsReport::ToJson() const {
  json list = json::array();
  for (const auto& r : rows)
    list.push_back({{"dialogue_id", r.dialogue_id},
                    {"turns", r.turns},
                    {"success", r.success},
                    {"termination_cause", r.termination_cause}});
  return {{"n_dialogues", n_dialogues},
          {"avg_turns", avg_turns},
          {"avg_success", avg_success},
          {"dialogues", list}};
}

}  // namespace usersim::runner
