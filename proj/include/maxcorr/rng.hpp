#pragma once

// Seedable, splittable random streams. Draws are organized in fixed-size
// blocks; block b of run seed s always produces the same values no matter
// how blocks are assigned to workers. splitmix64 keys the per-block
// xoshiro256++ state.

#include <array>
#include <cstdint>

namespace maxcorr {

inline constexpr std::uint64_t kDrawBlockSize = 65536;

inline std::uint64_t splitmix64_next(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

class Xoshiro256pp {
public:
    Xoshiro256pp() : state_{1, 2, 3, 4} {}

    explicit Xoshiro256pp(std::uint64_t seed) { reseed(seed); }

    void reseed(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& s : state_) s = splitmix64_next(sm);
    }

    std::uint64_t next() {
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

    // Uniform on [0,1) with 53 random bits.
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }
    std::array<std::uint64_t, 4> state_;
};

// Stream for draw block `block` of run `seed`. Pure function of its
// arguments, so any worker can reproduce any block.
inline Xoshiro256pp block_stream(std::uint64_t seed, std::uint64_t block) {
    std::uint64_t sm = seed ^ (0xD1B54A32D192ED03ULL * (block + 1));
    Xoshiro256pp rng;
    rng.reseed(splitmix64_next(sm));
    return rng;
}

} // namespace maxcorr
