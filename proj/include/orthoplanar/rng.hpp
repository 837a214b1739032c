#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>

namespace orthoplanar {

/// xoshiro256++ generator whose state is expanded with SplitMix64.
/// Replication i of a Monte Carlo run uses for_replication(seed, i), so every
/// path is a pure function of (master seed, index) regardless of how the
/// replications are scheduled.
class RandomStream {
public:
    using result_type = std::uint64_t;

    explicit RandomStream(std::uint64_t seed) noexcept {
        std::uint64_t sm = seed;
        for (auto& word : state_) word = splitmix64(sm);
    }

    static RandomStream for_replication(std::uint64_t seed, std::uint64_t index) noexcept {
        std::uint64_t mix = seed;
        const std::uint64_t a = splitmix64(mix);
        std::uint64_t mix2 = index ^ 0xd1b54a32d192ed03ULL;
        const std::uint64_t b = splitmix64(mix2);
        return RandomStream(a ^ (b * 0x9e3779b97f4a7c15ULL + 0x632be59bd9b4e019ULL));
    }

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept {
        return std::numeric_limits<result_type>::max();
    }

    result_type operator()() noexcept {
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

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() noexcept {
        return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
    }

    /// Exponential with the given rate, by inversion.
    double exponential(double rate) noexcept { return -std::log1p(-uniform()) / rate; }

    static std::uint64_t splitmix64(std::uint64_t& x) noexcept {
        std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
        return (x << k) | (x >> (64 - k));
    }

    std::array<std::uint64_t, 4> state_{};
};

}  // namespace orthoplanar
