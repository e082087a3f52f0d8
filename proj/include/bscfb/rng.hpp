#pragma once
// Counter-based random number streams (Philox4x32-10).
//
// Every random draw is a pure function of (seed, streamId, trial, position),
// so trials can run in any order or on any number of threads and reproduce
// bit-identically.  A Stream fixes (seed, streamId); a TrialStream further
// fixes the trial index.  Positions address individual draws:
//   - bernoulli() consumes one 32-bit lane per position (4 lanes per Philox
//     block), plenty of resolution for crossover probabilities >= 2^-31;
//   - uniform53() builds a 53-bit uniform from two lanes of a dedicated
//     block, used for message draws and codebook sampling.

#include <array>
#include <cstdint>

namespace bscfb::rng {

namespace detail {

// SplitMix64 finalizer; used only to whiten (seed, streamId) into Philox keys.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

inline void mulhilo32(std::uint32_t a, std::uint32_t b, std::uint32_t* hi,
                      std::uint32_t* lo) {
    std::uint64_t prod = static_cast<std::uint64_t>(a) * b;
    *hi = static_cast<std::uint32_t>(prod >> 32);
    *lo = static_cast<std::uint32_t>(prod);
}

} // namespace detail

// One 128-bit Philox4x32-10 block for the given counter and key.
inline std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                               std::uint32_t key0,
                                               std::uint32_t key1) {
    constexpr std::uint32_t kWeyl0 = 0x9E3779B9u, kWeyl1 = 0xBB67AE85u;
    constexpr std::uint32_t kMul0 = 0xD2511F53u, kMul1 = 0xCD9E8D57u;
    for (int round = 0; round < 10; ++round) {
        std::uint32_t hi0, lo0, hi1, lo1;
        detail::mulhilo32(kMul0, ctr[0], &hi0, &lo0);
        detail::mulhilo32(kMul1, ctr[2], &hi1, &lo1);
        ctr = {hi1 ^ ctr[1] ^ key0, lo1, hi0 ^ ctr[3] ^ key1, lo0};
        key0 += kWeyl0;
        key1 += kWeyl1;
    }
    return ctr;
}

// A named substream of the global seed.  Distinct streamIds give independent
// streams (the pair is whitened into the Philox key).
struct Stream {
    std::uint32_t key0 = 0;
    std::uint32_t key1 = 0;

    Stream() = default;
    Stream(std::uint64_t seed, std::uint64_t streamId) {
        std::uint64_t k = detail::mix64(seed ^ detail::mix64(streamId));
        key0 = static_cast<std::uint32_t>(k);
        key1 = static_cast<std::uint32_t>(k >> 32);
    }

    std::array<std::uint32_t, 4> block(std::uint64_t trial,
                                       std::uint64_t blockIndex) const {
        return philox4x32({static_cast<std::uint32_t>(blockIndex),
                           static_cast<std::uint32_t>(blockIndex >> 32),
                           static_cast<std::uint32_t>(trial),
                           static_cast<std::uint32_t>(trial >> 32)},
                          key0, key1);
    }

    // One Bernoulli(prob) draw at (trial, position); lane granularity 2^-32.
    bool bernoulli(std::uint64_t trial, std::uint64_t position, double prob) const {
        if (prob <= 0.0) return false;
        if (prob >= 1.0) return true;
        auto b = block(trial, position >> 2);
        std::uint32_t lane = b[position & 3];
        // threshold in [0, 2^32]; prob < 1 keeps it below 2^32.
        std::uint64_t thr = static_cast<std::uint64_t>(prob * 4294967296.0);
        return lane < thr;
    }

    // Uniform on [0,1) with 53 random bits, from block (trial, index) tagged
    // by a high counter bit so it never collides with bernoulli blocks.
    double uniform53(std::uint64_t trial, std::uint64_t index) const {
        auto b = block(trial, index | 0x8000000000000000ull);
        std::uint64_t hi = b[0] >> 5;  // 27 bits
        std::uint64_t lo = b[1] >> 6;  // 26 bits
        return static_cast<double>((hi << 26) | lo) * (1.0 / 9007199254740992.0);
    }

    // Uniform integer in [0, n).
    std::uint64_t uniform_index(std::uint64_t trial, std::uint64_t index,
                                std::uint64_t n) const {
        std::uint64_t v = static_cast<std::uint64_t>(uniform53(trial, index) * n);
        return v >= n ? n - 1 : v;
    }
};

// Stream bound to one trial; what the scheme runners consume.
struct TrialStream {
    Stream stream;
    std::uint64_t trial = 0;

    bool bernoulli(std::uint64_t position, double prob) const {
        return stream.bernoulli(trial, position, prob);
    }
    double uniform53(std::uint64_t index) const {
        return stream.uniform53(trial, index);
    }
};

} // namespace bscfb::rng
