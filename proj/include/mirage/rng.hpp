#pragma once

#include <cstdint>

namespace mirage {

// splitmix64: the single PRNG used throughout. Output is identical on every
// platform, which keeps serialized artifacts byte-stable. Per-trial streams
// are derived as seed ^ trial_index before construction.
class rng {
public:
    explicit rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // uniform in [0, 1)
    double uniform01() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // uniform in [lo, hi)
    double uniform(double lo, double hi) {
        return lo + (hi - lo) * uniform01();
    }

    // uniform integer in [0, n)
    std::uint64_t below(std::uint64_t n) {
        return next_u64() % n;
    }

private:
    std::uint64_t state_;
};

inline rng trial_stream(std::uint64_t seed, std::uint64_t trial_index) {
    return rng(seed ^ trial_index);
}

} // namespace mirage
