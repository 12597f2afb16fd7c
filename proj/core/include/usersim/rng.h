#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace usersim {

// Seeded pseudo-random source. Built on std::mt19937_64, whose output
// sequence is fixed by the standard, and maps raw draws to reals/indices
// with explicit arithmetic so that results are identical across standard
// library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t NextU64() { return engine_(); }

  // Uniform in [0, 1).
  double Uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // Uniform in [lo, hi).
  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform01(); }

  // Uniform in [0, n). n must be positive.
  std::size_t Index(std::size_t n);

  // Categorical draw proportional to `weights`. Returns weights.size() when
  // every weight is zero.
  std::size_t Categorical(std::span<const double> weights);

 private:
  std::mt19937_64 engine_;
};

// Stateless seed derivation, used to give each simulated user an
// independent stream from one master seed.
std::uint64_t DeriveSeed(std::uint64_t master, std::uint64_t index);

}  // namespace usersim
