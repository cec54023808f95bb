#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace resetruin {

/// SplitMix64 finalizer; bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t x) {
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Key for stream `index` below `parent`. Distinct (parent, index) pairs give
/// unrelated keys, so streams can be derived in any order.
constexpr std::uint64_t derive_key(std::uint64_t parent, std::uint64_t index) {
    return mix64(mix64(parent + 0x9e3779b97f4a7c15ULL) ^ (index * 0xd1b54a32d192ed03ULL + 1));
}

/**
 * xoshiro256++ generator whose state is expanded from a 64-bit key.
 *
 * Each trajectory gets its own stream keyed by (seed, site, trajectory), so
 * results do not depend on how trajectories are scheduled across threads.
 */
class TrajectoryStream {
public:
    using result_type = std::uint64_t;

    explicit TrajectoryStream(std::uint64_t key) {
        std::uint64_t sm = key;
        for (auto& word : state_) {
            sm += 0x9e3779b97f4a7c15ULL;
            word = mix64(sm);
        }
    }

    TrajectoryStream(std::uint64_t seed, std::uint64_t site, std::uint64_t trajectory)
        : TrajectoryStream(derive_key(derive_key(seed, site), trajectory)) {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()() {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    std::array<std::uint64_t, 4> state_{};
};

}  // namespace resetruin
