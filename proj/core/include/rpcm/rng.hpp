#pragma once

#include <cstdint>

namespace rpcm {

/// Counter-based pseudo-random generator (splitmix64 over seed, stream,
/// counter). Output depends only on (seed, stream, draw index), so parallel
/// generation of independent streams stays deterministic.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0);

    std::uint64_t next_u64();

    /// Uniform in [0, 1).
    double uniform01();

    double uniform(double lo, double hi);

    /// Standard normal via Box-Muller; consumes two draws per call.
    double normal();

    static std::uint64_t mix(std::uint64_t x);

private:
    std::uint64_t base_;
    std::uint64_t counter_ = 0;
};

}  // namespace rpcm
