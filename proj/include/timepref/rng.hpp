#pragma once

#include <cstdint>
#include <random>

namespace timepref {

struct RngSeed {
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;
};

std::uint64_t splitmix64(std::uint64_t& state);

/// Mixes (seed, stream) into the 64-bit seed handed to the engine.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

/// mt19937_64 keyed by (seed, stream). Distribution code is written out by hand
/// because libstdc++ and libc++ disagree on std::*_distribution outputs.
class Rng {
public:
    using result_type = std::uint64_t;

    explicit Rng(RngSeed s);
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) : Rng(RngSeed{seed, stream}) {}

    static constexpr result_type min() { return std::mt19937_64::min(); }
    static constexpr result_type max() { return std::mt19937_64::max(); }
    result_type operator()() { return engine_(); }

    /// Uniform on the open interval (0, 1), 53-bit resolution.
    double uniform01();
    double uniform(double a, double b);
    /// +1 or -1 with equal probability.
    int random_sign();
    /// Standard normal, Box-Muller without caching.
    double normal();
    /// Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n);

    /// Independent child generator; same parent seed and id give the same child.
    Rng substream(std::uint64_t id) const;
    const RngSeed& seed() const { return seed_; }

private:
    RngSeed seed_;
    std::mt19937_64 engine_;
};

}  // namespace timepref
