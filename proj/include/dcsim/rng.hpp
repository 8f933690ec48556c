#pragma once

#include <cstdint>
#include <random>

namespace dcsim {

/// Reproducible random stream.
///
/// The engine is `std::mt19937_64`, whose output sequence is fixed by the
/// C++ standard. Variates are derived here rather than through
/// `<random>` distributions, whose algorithms differ between standard
/// libraries, so a seed yields the same workload on every toolchain.
/// `split(k)` derives an independent child stream by hashing
/// (seed, k) with SplitMix64.
class Rng {
public:
    explicit Rng(std::uint64_t seed);

    std::uint64_t seed() const noexcept { return seed_; }
    Rng split(std::uint64_t stream) const;

    std::uint64_t next_u64() { return engine_(); }
    /// Uniform on the open interval (0, 1), 53-bit resolution.
    double uniform_open();
    /// Uniform on [lo, hi).
    double uniform(double lo, double hi);
    /// Uniform integer on [0, n); n > 0. Rejection sampling, no modulo bias.
    std::uint64_t below(std::uint64_t n);
    /// Exponential with the given mean, always > 0.
    double exponential(double mean);

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace dcsim
