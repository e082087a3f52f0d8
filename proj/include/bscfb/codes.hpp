#pragma once
// Codebook construction and verification.
//
//   make_simplex3          the exact three-word simplex: x1 all-zeros, x2
//                          ones on parts 1-2, x3 ones on parts 1 and 3;
//                          pairwise distance exactly 2m/3
//   make_simplex3_padded   L/4 shared zeros followed by the simplex on the
//                          remaining 3L/4 symbols: pairwise distance exactly
//                          L/2 while keeping the simplex part geometry, which
//                          lets finite-length simulations be compared against
//                          the exact part-count oracle
//   make_complementary_pair  two words at distance L (binary phase-II code)
//   make_almost_simplex    M random words with every pairwise distance
//                          verified inside L/2 +- slackFraction*L, retried up
//                          to 100 draws, deterministic in the seed
//
// Codebooks serialize to plain text, one 0/1 codeword per line.

#include <cmath>
#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "bscfb/channel.hpp"
#include "bscfb/errors.hpp"
#include "bscfb/rng.hpp"

namespace bscfb {

struct Codebook {
    int M = 0;                  // message count
    int L = 0;                  // codeword length in symbols
    std::vector<BitVec> words;  // M rows of length L
    int distanceSlack = 0;      // max |d(i,j) - L/2| over pairs, in symbols
};

inline int hamming_distance(const BitVec& a, const BitVec& b) {
    int d = 0;
    for (size_t i = 0; i < a.size(); ++i) d += a[i] != b[i];
    return d;
}

namespace detail {
inline int max_half_distance_deviation(const Codebook& cb) {
    int worst = 0;
    for (int i = 0; i < cb.M; ++i)
        for (int j = i + 1; j < cb.M; ++j) {
            int dev = 2 * hamming_distance(cb.words[i], cb.words[j]) - cb.L;
            if (dev < 0) dev = -dev;
            if (dev / 2 + (dev & 1) > worst) worst = dev / 2 + (dev & 1);
        }
    return worst; // ceil(|d - L/2|) over pairs
}
} // namespace detail

inline Codebook make_simplex3(int m) {
    if (m <= 0 || m % 3 != 0)
        throw std::domain_error("make_simplex3: m must be a positive multiple of 3");
    int m3 = m / 3;
    Codebook cb;
    cb.M = 3;
    cb.L = m;
    cb.words.assign(3, BitVec(static_cast<size_t>(m), 0));
    for (int i = 0; i < 2 * m3; ++i) cb.words[1][static_cast<size_t>(i)] = 1;
    for (int i = 0; i < m3; ++i) cb.words[2][static_cast<size_t>(i)] = 1;
    for (int i = 2 * m3; i < m; ++i) cb.words[2][static_cast<size_t>(i)] = 1;
    cb.distanceSlack = detail::max_half_distance_deviation(cb);
    return cb;
}

// Shared all-zero prefix of length L/4, then the simplex on the last 3L/4
// symbols.  All pairwise distances equal L/2 exactly.
inline Codebook make_simplex3_padded(int L) {
    if (L <= 0 || L % 4 != 0)
        throw std::domain_error("make_simplex3_padded: L must be a positive multiple of 4");
    Codebook inner = make_simplex3(3 * L / 4);
    Codebook cb;
    cb.M = 3;
    cb.L = L;
    cb.words.assign(3, BitVec(static_cast<size_t>(L), 0));
    for (int w = 0; w < 3; ++w)
        for (int i = 0; i < 3 * L / 4; ++i)
            cb.words[static_cast<size_t>(w)][static_cast<size_t>(L / 4 + i)] =
                inner.words[static_cast<size_t>(w)][static_cast<size_t>(i)];
    cb.distanceSlack = detail::max_half_distance_deviation(cb); // = 0
    return cb;
}

inline Codebook make_complementary_pair(int L) {
    if (L <= 0) throw std::domain_error("make_complementary_pair: L must be positive");
    Codebook cb;
    cb.M = 2;
    cb.L = L;
    cb.words.assign(2, BitVec(static_cast<size_t>(L), 0));
    for (auto& bit : cb.words[1]) bit = 1;
    cb.distanceSlack = detail::max_half_distance_deviation(cb); // = ceil(L/2)
    return cb;
}

// Random codebook with verified near-half pairwise distances.  Each attempt
// draws all M*L bits from the counter-based stream (attempt index as the
// trial coordinate), so the result is a pure function of the arguments.
// Throws CodebookError after 100 failed attempts.
inline Codebook make_almost_simplex(int M, int L, double slackFraction,
                                    std::uint64_t seed) {
    if (M < 2) throw std::domain_error("make_almost_simplex: need at least 2 words");
    if (L < 1) throw std::domain_error("make_almost_simplex: need positive length");
    if (!(slackFraction > 0.0 && slackFraction < 0.5))
        throw std::domain_error("make_almost_simplex: slackFraction outside (0, 1/2)");
    constexpr int kRetryBudget = 100;
    constexpr std::uint64_t kCodebookStream = 0x636f6465626f6f6bull; // "codebook"
    rng::Stream stream(seed, kCodebookStream);
    double slack = slackFraction * L;
    for (int attempt = 0; attempt < kRetryBudget; ++attempt) {
        Codebook cb;
        cb.M = M;
        cb.L = L;
        cb.words.assign(static_cast<size_t>(M), BitVec(static_cast<size_t>(L), 0));
        for (int w = 0; w < M; ++w)
            for (int i = 0; i < L; ++i)
                cb.words[static_cast<size_t>(w)][static_cast<size_t>(i)] =
                    static_cast<std::uint8_t>(stream.bernoulli(
                        static_cast<std::uint64_t>(attempt),
                        static_cast<std::uint64_t>(w) * L + i, 0.5));
        bool ok = true;
        for (int i = 0; i < M && ok; ++i)
            for (int j = i + 1; j < M && ok; ++j) {
                int d = hamming_distance(cb.words[static_cast<size_t>(i)],
                                         cb.words[static_cast<size_t>(j)]);
                if (d == 0 || std::abs(d - 0.5 * L) > slack) ok = false;
            }
        if (ok) {
            cb.distanceSlack = detail::max_half_distance_deviation(cb);
            return cb;
        }
    }
    throw CodebookError("make_almost_simplex: no codebook with distance window L/2 +- " +
                        std::to_string(slack) + " after 100 attempts (M=" +
                        std::to_string(M) + ", L=" + std::to_string(L) + ")");
}

inline std::string codebook_to_text(const Codebook& cb) {
    std::string out;
    out.reserve(static_cast<size_t>(cb.M) * (static_cast<size_t>(cb.L) + 1));
    for (const auto& w : cb.words) {
        for (auto bit : w) out.push_back(bit ? '1' : '0');
        out.push_back('\n');
    }
    return out;
}

inline Codebook codebook_from_text(const std::string& text) {
    Codebook cb;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        BitVec w;
        w.reserve(line.size());
        for (char c : line) {
            if (c == '0')
                w.push_back(0);
            else if (c == '1')
                w.push_back(1);
            else
                throw std::domain_error("codebook_from_text: invalid character");
        }
        cb.words.push_back(std::move(w));
    }
    if (cb.words.empty()) throw std::domain_error("codebook_from_text: no codewords");
    cb.M = static_cast<int>(cb.words.size());
    cb.L = static_cast<int>(cb.words[0].size());
    for (const auto& w : cb.words)
        if (static_cast<int>(w.size()) != cb.L)
            throw std::domain_error("codebook_from_text: ragged codeword lengths");
    cb.distanceSlack = detail::max_half_distance_deviation(cb);
    return cb;
}

} // namespace bscfb
