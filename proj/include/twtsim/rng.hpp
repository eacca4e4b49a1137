#pragma once

#include <cstdint>
#include <random>

namespace twtsim {

/// Seeded random stream. Every stochastic component takes one of these by
/// reference; nothing in the library touches global random state.
class Rng
{
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on [0, 1) with 53 bits of resolution.
    double uniform();

    /// Uniform integer on [lo, hi], both inclusive.
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

    /// Standard normal variate.
    double standard_normal();

  private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

/// Mixes a master seed and a stream index into an independent child seed
/// (splitmix64 finalizer).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);

}  // namespace twtsim
