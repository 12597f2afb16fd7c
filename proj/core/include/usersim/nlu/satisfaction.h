#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "usersim/dialogue.h"
#include "usersim/nlu/centroid_classifier.h"

namespace usersim::nlu {

inline constexpr int kMinSatisfaction = 1;
inline constexpr int kMaxSatisfaction = 5;
inline constexpr int kDefaultSatisfaction = 3;

struct SatisfactionSample {
  std::string text;
  int level = kDefaultSatisfaction;
};

// Same centroid/cosine scheme as intents, over satisfaction levels 1..5.
// Used to pre-label collected dialogues; simulation-time satisfaction is
// rule-driven instead.
class SatisfactionModel {
 public:
  SatisfactionModel() = default;
  explicit SatisfactionModel(CentroidClassifier classifier,
                             int default_level = kDefaultSatisfaction);

  int Predict(std::string_view text) const;

  const CentroidClassifier& classifier() const { return classifier_; }
  int default_level() const { return default_level_; }
  std::vector<int> Levels() const;

  nlohmann::json ToJson() const;
  static SatisfactionModel FromJson(const nlohmann::json& j);

 private:
  CentroidClassifier classifier_;
  int default_level_ = kDefaultSatisfaction;
};

// Throws Error(kEmptyTrainingSet) on empty input and Error(kInvalidConfig)
// for a level outside 1..5.
SatisfactionModel TrainSatisfactionClassifier(
    const std::vector<SatisfactionSample>& samples);

std::vector<SatisfactionSample> CollectSatisfactionSamples(
    const std::vector<Dialogue>& dialogues);

}  // namespace usersim::nlu
