#pragma once
// Executable state machines for the four transmission protocols:
//
//   run_no_feedback_baseline   one block, minimum-distance decoding
//   run_noiseless_switch_trial phase I message code + phase II binary
//                              disambiguation between the receiver's top two
//                              candidates, transmitter sees y exactly
//   run_noisy_switch_trial     as above but the transmitter ranks on the
//                              feedback-corrupted view x', and the receiver
//                              applies the Case-1/Case-2 threshold rule
//   run_active_trial           three phases: message code, receiver reports
//                              its candidate pair over the feedback channel
//                              with its own codebook, transmitter sends the
//                              binary disambiguation for the decoded pair
//
// Shared conventions (each also used by the exact oracle where applicable):
//   - rankings sort by (distance, message index); all ties break toward the
//     lower message index, on both sides of the link;
//   - a candidate pair maps to phase-II/III words by index order: the pair's
//     lower index gets the all-zeros word, the higher the all-ones word;
//   - the distance threshold is floor(t * n1 / 2 + 1e-9) symbols, where n1
//     is the realized phase-I length;
//   - phase lengths are llround(gamma*n) and llround(gamma1*n);
//   - when the transmitter's candidate pair does not contain the true
//     message it sends the intermediate block: first floor(len/2) zeros,
//     then ones;
//   - Case 1 (noisy switch, M >= 3): the receiver decides for its closest
//     codeword immediately after phase I iff the third-closest is within the
//     threshold of the second-closest; otherwise Case 2 decides between its
//     top two by total distance over all n symbols.
//
// Error taxonomy for an erroneous trial (decision != trueMessage):
//   P1   single-shot failure: Case-1 decision wrong, or the true message is
//        not in the receiver's pair (baseline errors are all P1)
//   P2   both parties held the same pair, the binary phase-II/III test failed
//   P2n  noisy switch only: receiver in Case 2 with the truth in its pair,
//        but the transmitter held a different pair
//   P3   active scheme only: pair report decoded correctly, final test failed
//        (P2 is reserved there for a wrongly decoded pair report)

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "bscfb/channel.hpp"
#include "bscfb/codes.hpp"
#include "bscfb/rng.hpp"

namespace bscfb {

enum class SchemeKind {
    NoFeedbackBaseline,
    NoiselessSwitch,
    NoisySwitch,
    ActiveFeedback,
};

enum class CaseTaken { Case1 = 1, Case2 = 2 };

enum class ErrorCategory { None, P1, P2, P2n, P3 };

inline const char* category_name(ErrorCategory c) {
    switch (c) {
        case ErrorCategory::None: return "none";
        case ErrorCategory::P1: return "P1";
        case ErrorCategory::P2: return "P2";
        case ErrorCategory::P2n: return "P2n";
        case ErrorCategory::P3: return "P3";
    }
    return "?";
}

inline const char* scheme_name(SchemeKind k) {
    switch (k) {
        case SchemeKind::NoFeedbackBaseline: return "baseline";
        case SchemeKind::NoiselessSwitch: return "noiseless";
        case SchemeKind::NoisySwitch: return "noisy";
        case SchemeKind::ActiveFeedback: return "active";
    }
    return "?";
}

// Unordered message pair, stored with lo < hi; {-1,-1} means "no pair" (e.g.
// the transmitter side of the baseline scheme).
struct MessagePair {
    int lo = -1;
    int hi = -1;
    bool valid() const { return lo >= 0; }
    bool contains(int msg) const { return msg == lo || msg == hi; }
    friend bool operator==(const MessagePair&, const MessagePair&) = default;
};

struct SchemeParams {
    double p = 0;             // forward crossover in [0, 1/2] (0 allowed here:
                              // degenerate channels are simulable)
    double p1 = 0;            // feedback crossover in [0, 1/2]
    int n = 0;                // total blocklength
    int M = 0;                // message count (>= 2)
    double gamma = 0;         // phase-I fraction
    double t = 0;             // decoding threshold fraction (noisy switch)
    double gamma1 = 0;        // phase-II fraction (active scheme)
    double slackFraction = 0.05; // codebook distance window
    std::uint64_t seed = 0;   // codebook seed (estimate() overrides it with
                              // its own seed so one value controls a run)
};

struct TrialTranscript {
    int trueMessage = 0;
    BitVec phase1Sent, phase1Received, phase1FeedbackSeen;
    std::vector<int> receiverRanking, transmitterRanking;
    CaseTaken caseTaken = CaseTaken::Case2;
    MessagePair receiverPair, transmitterPair;
    int decision = -1;
    ErrorCategory errorCategory = ErrorCategory::None;
};

// Per-trial noise streams.  Legs use distinct stream ids; positions within a
// leg are symbol indices (phases advance the position offset).
struct TrialStreams {
    rng::TrialStream forward;
    rng::TrialStream feedback;
    rng::TrialStream message; // used by the Monte Carlo driver
};

namespace stream_label {
inline constexpr std::uint64_t kForward = 1;
inline constexpr std::uint64_t kFeedback = 2;
inline constexpr std::uint64_t kMessage = 3;
inline constexpr std::uint64_t kPairCodebook = 0x70616972ull; // "pair"
} // namespace stream_label

inline TrialStreams trial_streams(std::uint64_t seed, std::uint64_t trial) {
    TrialStreams s;
    s.forward = {rng::Stream(seed, stream_label::kForward), trial};
    s.feedback = {rng::Stream(seed, stream_label::kFeedback), trial};
    s.message = {rng::Stream(seed, stream_label::kMessage), trial};
    return s;
}

namespace detail {

inline void require_prob_half(double x, const char* who) {
    if (!(x >= 0.0 && x <= 0.5))
        throw std::domain_error(std::string(who) + ": crossover outside [0, 1/2]");
}

inline int phase_length(double fraction, int n) {
    return static_cast<int>(std::llround(fraction * n));
}

inline int threshold_symbols(double t, int n1) {
    return static_cast<int>(std::floor(t * n1 / 2.0 + 1e-9));
}

// Messages sorted by (distance to target, index); also returns distances.
inline std::vector<int> rank_by_distance(const Codebook& cb, const BitVec& target,
                                         std::vector<int>* distances) {
    std::vector<int> d(static_cast<size_t>(cb.M));
    for (int i = 0; i < cb.M; ++i)
        d[static_cast<size_t>(i)] = hamming_distance(cb.words[static_cast<size_t>(i)], target);
    std::vector<int> order(static_cast<size_t>(cb.M));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return d[static_cast<size_t>(a)] != d[static_cast<size_t>(b)]
                                                    ? d[static_cast<size_t>(a)] < d[static_cast<size_t>(b)]
                                                    : a < b; });
    if (distances) *distances = std::move(d);
    return order;
}

inline MessagePair pair_of(int a, int b) {
    return a < b ? MessagePair{a, b} : MessagePair{b, a};
}

inline BitVec constant_block(int len, std::uint8_t value) {
    return BitVec(static_cast<size_t>(len), value);
}

inline BitVec intermediate_block(int len) {
    BitVec b(static_cast<size_t>(len), 1);
    for (int i = 0; i < len / 2; ++i) b[static_cast<size_t>(i)] = 0;
    return b;
}

// The phase-II/III word a pair member is responsible for under the
// index-order mapping.
inline BitVec pair_word(const MessagePair& pair, int member, int len) {
    return constant_block(len, member == pair.lo ? 0 : 1);
}

// Minimum-total-distance decision between the two members of `pair`, given
// their phase-I distances and the phase-II/III received block; ties go to the
// lower index (evaluated first, strict improvement required to switch).
inline int pair_decision(const MessagePair& pair, const std::vector<int>& phase1Dist,
                         const BitVec& received2) {
    int len2 = static_cast<int>(received2.size());
    int ones = 0;
    for (auto bit : received2) ones += bit;
    int dLo = phase1Dist[static_cast<size_t>(pair.lo)] + ones;          // zeros word
    int dHi = phase1Dist[static_cast<size_t>(pair.hi)] + (len2 - ones); // ones word
    return dHi < dLo ? pair.hi : pair.lo;
}

inline void require_codebook(const Codebook& cb, int M, int L, const char* who) {
    if (cb.M != M)
        throw std::domain_error(std::string(who) + ": codebook has wrong message count");
    if (cb.L != L)
        throw std::domain_error(std::string(who) + ": codebook has wrong length");
}

} // namespace detail

// Unordered pairs over M messages in lexicographic order:
// (0,1), (0,2), ..., (0,M-1), (1,2), ...  K = M(M-1)/2 of them.
inline int pair_count(int M) { return M * (M - 1) / 2; }

inline int pair_to_index(const MessagePair& pair, int M) {
    return pair.lo * (2 * M - pair.lo - 1) / 2 + (pair.hi - pair.lo - 1);
}

inline MessagePair pair_from_index(int index, int M) {
    for (int i = 0; i < M - 1; ++i) {
        int rowLen = M - 1 - i;
        if (index < rowLen) return {i, i + 1 + index};
        index -= rowLen;
    }
    throw std::domain_error("pair_from_index: index out of range");
}

// ---------------------------------------------------------------------------
// Baseline: one length-n block, minimum-distance decoding.  gamma, t, gamma1
// are ignored; every error is P1.  receiverPair records the top two
// candidates for analysis; the transmitter holds no pair.
inline TrialTranscript run_no_feedback_baseline(const SchemeParams& params,
                                                const Codebook& codebook,
                                                int trueMessage,
                                                const TrialStreams& streams) {
    detail::require_prob_half(params.p, "run_no_feedback_baseline");
    if (params.M < 2) throw std::domain_error("run_no_feedback_baseline: M must be >= 2");
    detail::require_codebook(codebook, params.M, params.n, "run_no_feedback_baseline");
    if (trueMessage < 0 || trueMessage >= params.M)
        throw std::domain_error("run_no_feedback_baseline: message index out of range");

    TrialTranscript tr;
    tr.trueMessage = trueMessage;
    tr.phase1Sent = codebook.words[static_cast<size_t>(trueMessage)];
    tr.phase1Received = transmit(tr.phase1Sent, params.p, streams.forward, 0);
    std::vector<int> dist;
    tr.receiverRanking = detail::rank_by_distance(codebook, tr.phase1Received, &dist);
    tr.receiverPair = detail::pair_of(tr.receiverRanking[0], tr.receiverRanking[1]);
    tr.caseTaken = CaseTaken::Case1;
    tr.decision = tr.receiverRanking[0];
    tr.errorCategory =
        tr.decision == trueMessage ? ErrorCategory::None : ErrorCategory::P1;
    return tr;
}

// ---------------------------------------------------------------------------
// One-switch scheme with noiseless feedback: the transmitter sees y exactly,
// so both parties always hold the same pair and the receiver always runs the
// pair decision (recorded as Case 2).  params.p1 is ignored.
inline TrialTranscript run_noiseless_switch_trial(const SchemeParams& params,
                                                  const Codebook& codebook,
                                                  int trueMessage,
                                                  const TrialStreams& streams) {
    detail::require_prob_half(params.p, "run_noiseless_switch_trial");
    if (params.M < 2) throw std::domain_error("run_noiseless_switch_trial: M must be >= 2");
    int n1 = detail::phase_length(params.gamma, params.n);
    int n2 = params.n - n1;
    if (n1 < 1 || n2 < 1)
        throw std::domain_error("run_noiseless_switch_trial: both phases need length >= 1");
    detail::require_codebook(codebook, params.M, n1, "run_noiseless_switch_trial");
    if (trueMessage < 0 || trueMessage >= params.M)
        throw std::domain_error("run_noiseless_switch_trial: message index out of range");

    TrialTranscript tr;
    tr.trueMessage = trueMessage;
    tr.phase1Sent = codebook.words[static_cast<size_t>(trueMessage)];
    tr.phase1Received = transmit(tr.phase1Sent, params.p, streams.forward, 0);
    tr.phase1FeedbackSeen = tr.phase1Received; // noiseless feedback
    std::vector<int> dist;
    tr.receiverRanking = detail::rank_by_distance(codebook, tr.phase1Received, &dist);
    tr.transmitterRanking = tr.receiverRanking;
    tr.receiverPair = detail::pair_of(tr.receiverRanking[0], tr.receiverRanking[1]);
    tr.transmitterPair = tr.receiverPair;
    tr.caseTaken = CaseTaken::Case2;

    BitVec sent2 = tr.transmitterPair.contains(trueMessage)
                       ? detail::pair_word(tr.transmitterPair, trueMessage, n2)
                       : detail::intermediate_block(n2);
    BitVec received2 = transmit(sent2, params.p, streams.forward,
                                static_cast<std::uint64_t>(n1));
    tr.decision = detail::pair_decision(tr.receiverPair, dist, received2);
    if (tr.decision == trueMessage)
        tr.errorCategory = ErrorCategory::None;
    else
        tr.errorCategory = tr.receiverPair.contains(trueMessage) ? ErrorCategory::P2
                                                                 : ErrorCategory::P1;
    return tr;
}

// ---------------------------------------------------------------------------
// One-switch scheme with noisy passive feedback.  The transmitter ranks on
// x' (the feedback-corrupted y); the receiver applies the Case-1/Case-2
// threshold rule on its own distances.  For M = 2 there is no third
// candidate and the receiver always runs Case 2.
inline TrialTranscript run_noisy_switch_trial(const SchemeParams& params,
                                              const Codebook& codebook,
                                              int trueMessage,
                                              const TrialStreams& streams) {
    detail::require_prob_half(params.p, "run_noisy_switch_trial");
    detail::require_prob_half(params.p1, "run_noisy_switch_trial");
    if (params.M < 2) throw std::domain_error("run_noisy_switch_trial: M must be >= 2");
    int n1 = detail::phase_length(params.gamma, params.n);
    int n2 = params.n - n1;
    if (n1 < 1 || n2 < 1)
        throw std::domain_error("run_noisy_switch_trial: both phases need length >= 1");
    detail::require_codebook(codebook, params.M, n1, "run_noisy_switch_trial");
    if (trueMessage < 0 || trueMessage >= params.M)
        throw std::domain_error("run_noisy_switch_trial: message index out of range");
    if (!(params.t >= 0.0))
        throw std::domain_error("run_noisy_switch_trial: t must be non-negative");
    int thr = detail::threshold_symbols(params.t, n1);

    TrialTranscript tr;
    tr.trueMessage = trueMessage;
    tr.phase1Sent = codebook.words[static_cast<size_t>(trueMessage)];
    tr.phase1Received = transmit(tr.phase1Sent, params.p, streams.forward, 0);
    tr.phase1FeedbackSeen = passive_feedback(tr.phase1Received, params.p1,
                                             streams.feedback, 0);
    std::vector<int> dist;
    tr.receiverRanking = detail::rank_by_distance(codebook, tr.phase1Received, &dist);
    tr.transmitterRanking =
        detail::rank_by_distance(codebook, tr.phase1FeedbackSeen, nullptr);
    tr.receiverPair = detail::pair_of(tr.receiverRanking[0], tr.receiverRanking[1]);
    tr.transmitterPair =
        detail::pair_of(tr.transmitterRanking[0], tr.transmitterRanking[1]);

    bool case1 = params.M >= 3 &&
                 dist[static_cast<size_t>(tr.receiverRanking[2])] <=
                     dist[static_cast<size_t>(tr.receiverRanking[1])] + thr;
    tr.caseTaken = case1 ? CaseTaken::Case1 : CaseTaken::Case2;

    // The transmitter cannot observe the receiver's case; it always executes
    // its own phase-II logic.
    BitVec sent2 = tr.transmitterPair.contains(trueMessage)
                       ? detail::pair_word(tr.transmitterPair, trueMessage, n2)
                       : detail::intermediate_block(n2);
    BitVec received2 = transmit(sent2, params.p, streams.forward,
                                static_cast<std::uint64_t>(n1));

    if (case1) {
        tr.decision = tr.receiverRanking[0]; // phase II ignored
    } else {
        tr.decision = detail::pair_decision(tr.receiverPair, dist, received2);
    }

    if (tr.decision == trueMessage) {
        tr.errorCategory = ErrorCategory::None;
    } else if (case1 || !tr.receiverPair.contains(trueMessage)) {
        tr.errorCategory = ErrorCategory::P1;
    } else if (tr.transmitterPair == tr.receiverPair) {
        tr.errorCategory = ErrorCategory::P2;
    } else {
        tr.errorCategory = ErrorCategory::P2n;
    }
    return tr;
}

// ---------------------------------------------------------------------------
// Active feedback.  Codebooks: phase1 is the M-word message code of length
// llround(gamma*n); pairCode has pair_count(M) words of length
// llround(gamma1*n) and is transmitted by the receiver over the feedback
// channel.  Phase III (the remaining symbols) carries the binary
// disambiguation for the transmitter's decoded pair.
struct SchemeCodebooks {
    Codebook phase1;
    std::optional<Codebook> pairCode;
};

inline TrialTranscript run_active_trial(const SchemeParams& params,
                                        const SchemeCodebooks& codebooks,
                                        int trueMessage,
                                        const TrialStreams& streams) {
    detail::require_prob_half(params.p, "run_active_trial");
    detail::require_prob_half(params.p1, "run_active_trial");
    if (params.M < 2) throw std::domain_error("run_active_trial: M must be >= 2");
    int n1 = detail::phase_length(params.gamma, params.n);
    int n2 = detail::phase_length(params.gamma1, params.n);
    int n3 = params.n - n1 - n2;
    if (n1 < 1 || n2 < 1 || n3 < 1)
        throw std::domain_error("run_active_trial: all three phases need length >= 1");
    detail::require_codebook(codebooks.phase1, params.M, n1, "run_active_trial");
    int K = pair_count(params.M);
    if (!codebooks.pairCode)
        throw std::domain_error("run_active_trial: pair codebook required");
    detail::require_codebook(*codebooks.pairCode, K, n2, "run_active_trial(pair)");
    if (trueMessage < 0 || trueMessage >= params.M)
        throw std::domain_error("run_active_trial: message index out of range");

    TrialTranscript tr;
    tr.trueMessage = trueMessage;
    tr.phase1Sent = codebooks.phase1.words[static_cast<size_t>(trueMessage)];
    tr.phase1Received = transmit(tr.phase1Sent, params.p, streams.forward, 0);
    // No passive phase-I feedback in this protocol.
    std::vector<int> dist;
    tr.receiverRanking = detail::rank_by_distance(codebooks.phase1, tr.phase1Received, &dist);
    tr.receiverPair = detail::pair_of(tr.receiverRanking[0], tr.receiverRanking[1]);
    tr.caseTaken = CaseTaken::Case2;

    // Phase II: receiver encodes its pair index over the feedback channel;
    // transmitter decodes by minimum distance (ties to the lower index).
    int sentPairIndex = pair_to_index(tr.receiverPair, params.M);
    const BitVec& pairWord = codebooks.pairCode->words[static_cast<size_t>(sentPairIndex)];
    BitVec pairReceived = transmit(pairWord, params.p1, streams.feedback, 0);
    int decodedPairIndex = 0;
    if (K > 1) {
        std::vector<int> pd;
        std::vector<int> order = detail::rank_by_distance(*codebooks.pairCode,
                                                          pairReceived, &pd);
        decodedPairIndex = order[0];
    }
    tr.transmitterPair = pair_from_index(decodedPairIndex, params.M);

    // Phase III on the forward channel, positions continuing after phase I.
    BitVec sent3 = tr.transmitterPair.contains(trueMessage)
                       ? detail::pair_word(tr.transmitterPair, trueMessage, n3)
                       : detail::intermediate_block(n3);
    BitVec received3 = transmit(sent3, params.p, streams.forward,
                                static_cast<std::uint64_t>(n1));
    tr.decision = detail::pair_decision(tr.receiverPair, dist, received3);

    if (tr.decision == trueMessage) {
        tr.errorCategory = ErrorCategory::None;
    } else if (!tr.receiverPair.contains(trueMessage)) {
        tr.errorCategory = ErrorCategory::P1;
    } else if (!(tr.transmitterPair == tr.receiverPair)) {
        tr.errorCategory = ErrorCategory::P2;
    } else {
        tr.errorCategory = ErrorCategory::P3;
    }
    return tr;
}

// ---------------------------------------------------------------------------
// Codebook construction for a scheme run (deterministic in params.seed).
// The baseline with M = 2 uses the complementary pair (distance n); all other
// message codes are random almost-simplex codebooks.  The active scheme's
// pair code draws from a separate stream of the same seed.
inline SchemeCodebooks make_scheme_codebooks(SchemeKind kind, const SchemeParams& params) {
    SchemeCodebooks out;
    switch (kind) {
        case SchemeKind::NoFeedbackBaseline:
            out.phase1 = params.M == 2
                             ? make_complementary_pair(params.n)
                             : make_almost_simplex(params.M, params.n,
                                                   params.slackFraction, params.seed);
            break;
        case SchemeKind::NoiselessSwitch:
        case SchemeKind::NoisySwitch: {
            int n1 = detail::phase_length(params.gamma, params.n);
            out.phase1 = make_almost_simplex(params.M, n1, params.slackFraction,
                                             params.seed);
            break;
        }
        case SchemeKind::ActiveFeedback: {
            int n1 = detail::phase_length(params.gamma, params.n);
            int n2 = detail::phase_length(params.gamma1, params.n);
            out.phase1 = make_almost_simplex(params.M, n1, params.slackFraction,
                                             params.seed);
            int K = pair_count(params.M);
            if (K == 1) {
                // Single possible pair: a one-word placeholder code.
                Codebook cb;
                cb.M = 1;
                cb.L = n2;
                cb.words.assign(1, BitVec(static_cast<size_t>(n2), 0));
                cb.distanceSlack = 0;
                out.pairCode = cb;
            } else {
                out.pairCode = make_almost_simplex(
                    K, n2, params.slackFraction,
                    rng::detail::mix64(params.seed ^ stream_label::kPairCodebook));
            }
            break;
        }
    }
    return out;
}

inline TrialTranscript run_trial(SchemeKind kind, const SchemeParams& params,
                                 const SchemeCodebooks& codebooks, int trueMessage,
                                 const TrialStreams& streams) {
    switch (kind) {
        case SchemeKind::NoFeedbackBaseline:
            return run_no_feedback_baseline(params, codebooks.phase1, trueMessage, streams);
        case SchemeKind::NoiselessSwitch:
            return run_noiseless_switch_trial(params, codebooks.phase1, trueMessage, streams);
        case SchemeKind::NoisySwitch:
            return run_noisy_switch_trial(params, codebooks.phase1, trueMessage, streams);
        case SchemeKind::ActiveFeedback:
            return run_active_trial(params, codebooks, trueMessage, streams);
    }
    throw std::domain_error("run_trial: unknown scheme");
}

// ---------------------------------------------------------------------------
// Line-delimited transcript record, fields in declaration order, space
// separated:
//   trueMessage phase1Sent phase1Received phase1FeedbackSeen receiverRanking
//   transmitterRanking caseTaken receiverPair transmitterPair decision
//   errorCategory
// Bit sequences are 0/1 strings, rankings and pairs comma-joined; empty
// sequences and invalid pairs are written as '-'.
inline std::string transcript_line(const TrialTranscript& tr) {
    auto bits = [](const BitVec& v) {
        if (v.empty()) return std::string("-");
        std::string s;
        s.reserve(v.size());
        for (auto b : v) s.push_back(b ? '1' : '0');
        return s;
    };
    auto ints = [](const std::vector<int>& v) {
        if (v.empty()) return std::string("-");
        std::string s;
        for (size_t i = 0; i < v.size(); ++i) {
            if (i) s.push_back(',');
            s += std::to_string(v[i]);
        }
        return s;
    };
    auto pair = [](const MessagePair& p) {
        if (!p.valid()) return std::string("-");
        return std::to_string(p.lo) + "," + std::to_string(p.hi);
    };
    std::string s;
    s += std::to_string(tr.trueMessage);
    s += ' ';
    s += bits(tr.phase1Sent);
    s += ' ';
    s += bits(tr.phase1Received);
    s += ' ';
    s += bits(tr.phase1FeedbackSeen);
    s += ' ';
    s += ints(tr.receiverRanking);
    s += ' ';
    s += ints(tr.transmitterRanking);
    s += ' ';
    s += std::to_string(static_cast<int>(tr.caseTaken));
    s += ' ';
    s += pair(tr.receiverPair);
    s += ' ';
    s += pair(tr.transmitterPair);
    s += ' ';
    s += std::to_string(tr.decision);
    s += ' ';
    s += category_name(tr.errorCategory);
    return s;
}

} // namespace bscfb
