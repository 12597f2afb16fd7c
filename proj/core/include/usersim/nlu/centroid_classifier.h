#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "usersim/nlu/token_vector.h"

namespace usersim::nlu {

struct LabeledText {
  std::string text;
  std::string label;
};

struct ScoredLabel {
  std::string label;
  double similarity = 0.0;
};

// Nearest-centroid classifier over TF-IDF vectors. Term frequency is the raw
// token count; idf(t) = ln((1 + N) / (1 + df(t))) + 1 with N and df taken
// over the distinct training texts. Each label's centroid is the
// L2-normalized mean of its samples' TF-IDF vectors.
class CentroidClassifier {
 public:
  CentroidClassifier() = default;

  // Throws Error(kEmptyTrainingSet) on an empty sample list. Labels whose
  // samples contain no tokens at all get no centroid.
  static CentroidClassifier Train(const std::vector<LabeledText>& samples);

  // TF-IDF vector of `text` restricted to the training vocabulary.
  TokenVector Vectorize(std::string_view text) const;

  // Best label by cosine similarity; ties go to the lexicographically
  // smallest label. nullopt when the query vector is empty.
  std::optional<ScoredLabel> Best(std::string_view text) const;
  std::vector<ScoredLabel> Scores(std::string_view text) const;

  const std::set<std::string>& vocabulary() const { return vocabulary_; }
  const std::map<std::string, double>& idf() const { return idf_; }
  const std::map<std::string, TokenVector>& centroids() const { return centroids_; }

  nlohmann::json ToJson() const;
  static CentroidClassifier FromJson(const nlohmann::json& j);

 private:
  std::set<std::string> vocabulary_;
  std::map<std::string, double> idf_;
  std::map<std::string, TokenVector> centroids_;
};

}  // namespace usersim::nlu
