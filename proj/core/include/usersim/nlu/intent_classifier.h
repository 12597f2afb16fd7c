#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "usersim/dialogue.h"
#include "usersim/nlu/centroid_classifier.h"

namespace usersim::nlu {

inline constexpr std::string_view kUnknownIntent = "UNKNOWN";

struct IntentClassifierConfig {
  Intent fallback_intent{std::string(kUnknownIntent)};
  // Best similarity below this returns the fallback. In [0, 1].
  double min_similarity = 0.0;
};

struct IntentPrediction {
  Intent intent;
  double similarity = 0.0;
};

class IntentModel {
 public:
  IntentModel() = default;
  IntentModel(CentroidClassifier classifier, IntentClassifierConfig config);

  IntentPrediction Classify(std::string_view text) const;

  const CentroidClassifier& classifier() const { return classifier_; }
  const IntentClassifierConfig& config() const { return config_; }
  std::vector<Intent> Intents() const;

  nlohmann::json ToJson() const;
  static IntentModel FromJson(const nlohmann::json& j);

 private:
  CentroidClassifier classifier_;
  IntentClassifierConfig config_;
};

struct IntentSample {
  std::string text;
  Intent intent;
};

IntentModel TrainIntentClassifier(const std::vector<IntentSample>& samples,
                                  const IntentClassifierConfig& config = {});

// Collects (text, intent) pairs from the annotated utterances of one side.
std::vector<IntentSample> CollectIntentSamples(
    const std::vector<Dialogue>& dialogues, Participant side);

}  // namespace usersim::nlu
