#pragma once

#include <cstdint>
#include <random>

namespace plantnav {

// Every random draw in the project flows through this wrapper. The draws are
// implemented by hand instead of with std distributions so identical seeds
// give identical streams on every platform and standard library.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Unbiased integer in [0, n) via masked rejection. n = 0 or 1 returns 0.
    std::uint64_t below(std::uint64_t n);

    // Uniform double in [0, 1) built from the top 53 bits.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform double in [-1, 1).
    double uniform_signed() { return 2.0 * uniform() - 1.0; }

private:
    std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

// Stream kinds mixed into derived seeds so the consumers cannot collide.
enum class Stream : std::uint64_t {
    NetInit = 1,
    Episode = 2,
    Rollout = 3,
    Target = 4,
};

// Seed for sub-stream (kind, index) of a base seed. Pure function; episode k
// always gets the same stream no matter how many draws earlier episodes made.
std::uint64_t derive_seed(std::uint64_t base, Stream kind, std::uint64_t index);

}  // namespace plantnav
