#include "usersim/nlu/intent_classifier.h"

#include "usersim/error.h"

namespace usersim::nlu {

using nlohmann::json;

IntentModel::IntentModel(CentroidClassifier classifier, IntentClassifierConfig config)
    : classifier_(std::move(classifier)), config_(std::move(config)) {
  if (config_.min_similarity < 0.0 || config_.min_similarity > 1.0)
    throw Error(ErrorCode::kInvalidConfig, "min_similarity must lie in [0,1]");
}

IntentPrediction IntentModel::Classify(std::string_view text) const {
  auto best = classifier_.Best(text);
  if (!best || best->similarity < config_.min_similarity)
    return {config_.fallback_intent, 0.0};
  return {Intent(best->label), best->similarity};
}

std::vector<Intent> IntentModel::Intents() const {
  std::vector<Intent> out;
  for (const auto& [label, _] : classifier_.centroids()) out.emplace_back(label);
  return out;
}

json IntentModel::ToJson() const {
  json j = classifier_.ToJson();
  j["fallback_intent"] = config_.fallback_intent.label();
  j["min_similarity"] = config_.min_similarity;
  return j;
}

IntentModel IntentModel::FromJson(const json& j) {
  IntentClassifierConfig config;
  try {
    config.fallback_intent = Intent(j.at("fallback_intent").get<std::string>());
    config.min_similarity = j.at("min_similarity").get<double>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kMalformedDocument, e.what());
  }
  return IntentModel(CentroidClassifier::FromJson(j), config);
}

IntentModel TrainIntentClassifier(const std::vector<IntentSample>& samples,
                                  const IntentClassifierConfig& config) {
  std::vector<LabeledText> labeled;
  labeled.reserve(samples.size());
  for (const auto& s : samples) labeled.push_back({s.text, s.intent.label()});
  return IntentModel(CentroidClassifier::Train(labeled), config);
}

std::vector<IntentSample> CollectIntentSamples(const std::vector<Dialogue>& dialogues,
                                               Participant side) {
  std::vector<IntentSample> samples;
  for (const auto& d : dialogues)
    for (const auto& u : d.utterances)
      if (u.participant == side && u.intent) samples.push_back({u.text, *u.intent});
  return samples;
}

}  // namespace usersim::nlu
