#include "usersim/nlu/satisfaction.h"

#include "usersim/error.h"

namespace usersim::nlu {

using nlohmann::json;

SatisfactionModel::SatisfactionModel(CentroidClassifier classifier, int default_level)
    : classifier_(std::move(classifier)), default_level_(default_level) {}

int SatisfactionModel::Predict(std::string_view text) const {
  auto best = classifier_.Best(text);
  if (!best || best->similarity <= 0.0) return default_level_;
  return std::stoi(best->label);
}

std::vector<int> SatisfactionModel::Levels() const {
  std::vector<int> levels;
  for (const auto& [label, _] : classifier_.centroids()) levels.push_back(std::stoi(label));
  return levels;
}

json SatisfactionModel::ToJson() const {
  json j = classifier_.ToJson();
  j["default_level"] = default_level_;
  return j;
}

SatisfactionModel SatisfactionModel::FromJson(const json& j) {
  return SatisfactionModel(CentroidClassifier::FromJson(j),
                           j.value("default_level", kDefaultSatisfaction));
}

SatisfactionModel TrainSatisfactionClassifier(
    const std::vector<SatisfactionSample>& samples) {
  if (samples.empty())
    throw Error(ErrorCode::kEmptyTrainingSet, "no satisfaction samples");
  std::vector<LabeledText> labeled;
  for (const auto& s : samples) {
    if (s.level < kMinSatisfaction || s.level > kMaxSatisfaction)
      throw Error(ErrorCode::kInvalidConfig,
                  "satisfaction level " + std::to_string(s.level) + " outside 1..5");
    labeled.push_back({s.text, std::to_string(s.level)});
  }
  return SatisfactionModel(CentroidClassifier::Train(labeled));
}

std::vector<SatisfactionSample> CollectSatisfactionSamples(
    const std::vector<Dialogue>& dialogues) {
  std::vector<SatisfactionSample> samples;
  for (const auto& d : dialogues)
    for (const auto& u : d.utterances)
      if (u.participant == Participant::kUser && u.satisfaction)
        samples.push_back({u.text, *u.satisfaction});
  return samples;
}

}  // namespace usersim::nlu
