#include "timepref/rng.hpp"

#include <cmath>
#include <numbers>

namespace timepref {

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t s = seed;
    std::uint64_t a = splitmix64(s);
    std::uint64_t t = stream ^ a;
    return splitmix64(t);
}

Rng::Rng(RngSeed s) : seed_(s), engine_(derive_seed(s.seed, s.stream)) {}

double Rng::uniform01() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

double Rng::uniform(double a, double b) { return a + (b - a) * uniform01(); }

int Rng::random_sign() { return (engine_() >> 63) ? 1 : -1; }

double Rng::normal() {
    const double u1 = uniform01();
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::uint64_t Rng::below(std::uint64_t n) {
    // Reject the short top bucket so the result stays exactly uniform.
    const std::uint64_t limit = max() - max() % n;
    std::uint64_t x;
    do {
        x = engine_();
    } while (x >= limit && limit != 0);
    return x % n;
}

Rng Rng::substream(std::uint64_t id) const {
    std::uint64_t s = seed_.stream * 0x100000001b3ULL + 0x51ed270b27cb2a5ULL;
    std::uint64_t mixed = splitmix64(s) ^ id;
    return Rng(RngSeed{seed_.seed, splitmix64(mixed)});
}

}  // namespace timepref
