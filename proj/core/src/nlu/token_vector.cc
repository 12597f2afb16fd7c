#include "usersim/nlu/token_vector.h"

#include <cmath>

namespace usersim::nlu {

void TokenVector::Add(const std::string& token, double weight) {
  Set(token, Get(token) + weight);
}

void TokenVector::Set(const std::string& token, double weight) {
  if (weight == 0.0) {
    weights_.erase(token);
  } else {
    weights_[token] = weight;
  }
}

double TokenVector::Get(const std::string& token) const {
  auto it = weights_.find(token);
  return it == weights_.end() ? 0.0 : it->second;
}

double TokenVector::Norm() const {
  double sum = 0.0;
  for (const auto& [_, w] : weights_) sum += w * w;
  return std::sqrt(sum);
}

double TokenVector::Dot(const TokenVector& other) const {
  const auto& small = size() <= other.size() ? weights_ : other.weights_;
  const auto& large = size() <= other.size() ? other : *this;
  double sum = 0.0;
  for (const auto& [token, w] : small) sum += w * large.Get(token);
  return sum;
}

TokenVector TokenVector::Normalized() const {
  TokenVector out = *this;
  double n = Norm();
  if (n > 0.0) out.Scale(1.0 / n);
  return out;
}

void TokenVector::Scale(double factor) {
  if (factor == 0.0) {
    weights_.clear();
    return;
  }
  for (auto& [_, w] : weights_) w *= factor;
}

double Cosine(const TokenVector& a, const TokenVector& b) {
  double na = a.Norm();
  double nb = b.Norm();
  if (na == 0.0 || nb == 0.0) return 0.0;
  return a.Dot(b) / (na * nb);
}

}  // namespace usersim::nlu
