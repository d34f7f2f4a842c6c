#include "rpcm/rng.hpp"

#include <cmath>

namespace rpcm {

namespace {
constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
constexpr double kTwoPi = 2.0 * 3.14159265358979323846;
}  // namespace

std::uint64_t CounterRng::mix(std::uint64_t x) {
    x += kGolden;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream)
    : base_(mix(mix(seed) ^ (stream * kGolden + 1))) {}

std::uint64_t CounterRng::next_u64() {
    return mix(base_ + counter_++ * kGolden);
}

double CounterRng::uniform01() {
    // 53-bit mantissa in [0, 1).
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double CounterRng::uniform(double lo, double hi) {
    return lo + (hi - lo) * uniform01();
}

double CounterRng::normal() {
    // Open-interval uniforms keep log() finite.
    const double u1 = (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
}

}  // namespace rpcm
