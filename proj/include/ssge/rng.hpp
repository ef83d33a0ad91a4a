#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <random>

namespace ssge {

// SplitMix64 mixing step; used to derive independent stream seeds.
std::uint64_t splitmix64(std::uint64_t x);

// Deterministic sub-seed for stream `stream` of a base seed.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

// mt19937_64 with explicit, portable transforms so that every draw is a
// pure function of the seed (std::*_distribution is implementation-defined
// and would not reproduce across standard libraries).
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform on [0, 1), 53-bit resolution.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer on [lo, hi], inclusive; Lemire rejection, unbiased.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

  // Standard normal via Box-Muller; the spare draw is cached.
  double gaussian();

  Eigen::VectorXd gaussian_vector(int n);

private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace ssge
