#include "usersim/rng.h"

namespace usersim {

std::size_t Rng::Index(std::size_t n) {
  auto i = static_cast<std::size_t>(Uniform01() * static_cast<double>(n));
  return i < n ? i : n - 1;
}

std::size_t Rng::Categorical(std::span<const double> weights) {
  double total = 0.0;
  for (double w : weights) total += w > 0.0 ? w : 0.0;
  if (total <= 0.0) return weights.size();
  double target = Uniform01() * total;
  double acc = 0.0;
  std::size_t last_positive = weights.size();
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] <= 0.0) continue;
    acc += weights[i];
    last_positive = i;
    if (target < acc) return i;
  }
  return last_positive;
}

std::uint64_t DeriveSeed(std::uint64_t master, std::uint64_t index) {
  // splitmix64 finalizer over (master, index).
  std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace usersim
