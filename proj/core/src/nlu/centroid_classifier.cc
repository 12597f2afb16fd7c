#include "usersim/nlu/centroid_classifier.h"

#include <algorithm>
#include <cmath>

#include "usersim/error.h"
#include "usersim/nlu/tokenizer.h"

namespace usersim::nlu {

using nlohmann::json;

CentroidClassifier CentroidClassifier::Train(const std::vector<LabeledText>& samples) {
  if (samples.empty())
    throw Error(ErrorCode::kEmptyTrainingSet, "no training samples");

  CentroidClassifier model;

  // Document frequencies over distinct texts, so that repeating the whole
  // sample k times leaves the model unchanged.
  std::map<std::string, std::vector<std::string>> distinct;
  for (const auto& s : samples)
    if (!distinct.contains(s.text)) distinct.emplace(s.text, Tokenize(s.text));
  std::map<std::string, int> df;
  for (const auto& [_, tokens] : distinct) {
    std::set<std::string> unique(tokens.begin(), tokens.end());
    for (const auto& t : unique) ++df[t];
  }
  const double n = static_cast<double>(distinct.size());
  for (const auto& [token, count] : df) {
    model.vocabulary_.insert(token);
    model.idf_[token] = std::log((1.0 + n) / (1.0 + count)) + 1.0;
  }

  std::map<std::string, TokenVector> sums;
  for (const auto& s : samples) {
    TokenVector v = model.Vectorize(s.text);
    auto& sum = sums[s.label];
    for (const auto& [token, w] : v.weights()) sum.Add(token, w);
  }
  // Mean then normalize; the 1/count factor cancels under normalization.
  for (auto& [label, sum] : sums)
    if (!sum.empty()) model.centroids_.emplace(label, sum.Normalized());
  return model;
}

TokenVector CentroidClassifier::Vectorize(std::string_view text) const {
  TokenVector v;
  for (const auto& token : Tokenize(text)) {
    auto it = idf_.find(token);
    if (it != idf_.end()) v.Add(token, it->second);
  }
  return v;
}

std::vector<ScoredLabel> CentroidClassifier::Scores(std::string_view text) const {
  std::vector<ScoredLabel> scores;
  TokenVector query = Vectorize(text);
  if (query.empty()) return scores;
  for (const auto& [label, centroid] : centroids_) {
    double sim = Cosine(query, centroid);
    scores.push_back({label, std::clamp(sim, 0.0, 1.0)});
  }
  return scores;
}

std::optional<ScoredLabel> CentroidClassifier::Best(std::string_view text) const {
  auto scores = Scores(text);
  if (scores.empty()) return std::nullopt;
  // centroids_ is ordered by label, so strict '>' keeps the smallest label
  // among equal scores.
  const ScoredLabel* best = &scores.front();
  for (const auto& s : scores)
    if (s.similarity > best->similarity) best = &s;
  return *best;
}

json CentroidClassifier::ToJson() const {
  json centroids = json::object();
  for (const auto& [label, v] : centroids_) centroids[label] = v.weights();
  return {{"vocabulary", vocabulary_}, {"idf", idf_}, {"centroids", centroids}};
}

CentroidClassifier CentroidClassifier::FromJson(const json& j) {
  CentroidClassifier model;
  try {
    model.vocabulary_ = j.at("vocabulary").get<std::set<std::string>>();
    model.idf_ = j.at("idf").get<std::map<std::string, double>>();
    for (const auto& [label, weights] : j.at("centroids").items()) {
      TokenVector v;
      for (const auto& [token, w] : weights.items()) v.Set(token, w.get<double>());
      model.centroids_.emplace(label, std::move(v));
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kMalformedDocument, e.what());
  }
  return model;
}

}  // namespace usersim::nlu
