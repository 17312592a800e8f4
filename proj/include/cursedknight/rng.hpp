#pragma once

#include <cstdint>

namespace cursedknight {

// SplitMix64 (Steele/Lea/Vigna reference implementation). Used to expand a
// user seed into generator state and to derive independent substreams.
inline std::uint64_t splitmix64_next(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// xoshiro256++ (Blackman/Vigna). Seedable, portable (fully specified by its
// reference code, no library-dependent distributions) and passes the usual
// statistical test batteries.
//
// Substreams: Rng(seed, stream) folds the stream index into the SplitMix64
// seeding state, giving stream s the state expansion of seed' =
// splitmix64(seed xor golden*(s+1)). Parallel simulation batches each get
// their own stream, so results do not depend on the thread layout.
class Rng {
public:
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) {
        std::uint64_t sm = seed;
        if (stream != 0) {
            std::uint64_t mix = stream;
            sm ^= splitmix64_next(mix);
        }
        for (auto& word : state_) word = splitmix64_next(sm);
    }

    std::uint64_t next_u64() {
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

    // uniform on [0,1) with 53 random bits; bit-identical across platforms
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // uniform on [lo, hi]
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }
    std::uint64_t state_[4];
};

}  // namespace cursedknight
