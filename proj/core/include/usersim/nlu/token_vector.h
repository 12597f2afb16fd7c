#pragma once

#include <map>
#include <string>

namespace usersim::nlu {

// Sparse non-negative weight vector over tokens. Zero weights are never
// stored.
class TokenVector {
 public:
  TokenVector() = default;

  void Add(const std::string& token, double weight);
  void Set(const std::string& token, double weight);
  double Get(const std::string& token) const;

  double Norm() const;
  double Dot(const TokenVector& other) const;
  // Unit-norm copy; the zero vector stays zero.
  TokenVector Normalized() const;
  void Scale(double factor);

  bool empty() const { return weights_.empty(); }
  std::size_t size() const { return weights_.size(); }
  const std::map<std::string, double>& weights() const { return weights_; }

  friend bool operator==(const TokenVector&, const TokenVector&) = default;

 private:
  std::map<std::string, double> weights_;
};

// Cosine of the angle between a and b; 0 when either is the zero vector.
double Cosine(const TokenVector& a, const TokenVector& b);

}  // namespace usersim::nlu
