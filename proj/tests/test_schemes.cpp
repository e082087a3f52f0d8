// Protocol state machines: transcript structural invariants, category
// taxonomy per scheme, determinism, and exact agreement between simulated
// category rates and the combinatorial oracle on matched-geometry codebooks.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <set>
#include <sstream>
#include <vector>

#include "bscfb/codes.hpp"
#include "bscfb/oracle.hpp"
#include "bscfb/schemes.hpp"

using namespace bscfb;
using Catch::Matchers::WithinAbs;

namespace {

// Test-local binomial machinery on lgamma, independent of the library.
double log_pmf(int n, int k, double p) {
    if (k < 0 || k > n) return -std::numeric_limits<double>::infinity();
    double lp = p > 0 ? std::log(p) : -std::numeric_limits<double>::infinity();
    double lq = p < 1 ? std::log1p(-p) : -std::numeric_limits<double>::infinity();
    if (k == 0 && p == 0) return 0.0;
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0) +
           k * lp + (n - k) * lq;
}

double tail_gt(int n, double p, double x) { // P(W > x)
    double s = 0;
    for (int k = static_cast<int>(std::floor(x)) + 1; k <= n; ++k)
        s += std::exp(log_pmf(n, k, p));
    return s;
}

int dist(const BitVec& a, const BitVec& b) { return hamming_distance(a, b); }

} // namespace

TEST_CASE("pair index mapping is lexicographic", "[schemes]") {
    for (int M : {2, 3, 4, 6}) {
        int K = pair_count(M);
        REQUIRE(K == M * (M - 1) / 2);
        int k = 0;
        for (int i = 0; i < M; ++i) {
            for (int j = i + 1; j < M; ++j, ++k) {
                CHECK(pair_to_index({i, j}, M) == k);
                MessagePair back = pair_from_index(k, M);
                CHECK(back.lo == i);
                CHECK(back.hi == j);
            }
        }
    }
}

TEST_CASE("transcript invariants across schemes", "[schemes]") {
    struct Config {
        SchemeKind kind;
        SchemeParams params;
    };
    SchemeParams base;
    base.p = 0.2;
    base.p1 = 0.1;
    base.n = 60;
    base.M = 3;
    base.gamma = 0.6;
    base.t = 0.2;
    base.gamma1 = 0.2;
    base.slackFraction = 0.1;
    base.seed = 99;

    for (SchemeKind kind :
         {SchemeKind::NoFeedbackBaseline, SchemeKind::NoiselessSwitch,
          SchemeKind::NoisySwitch, SchemeKind::ActiveFeedback}) {
        SchemeParams params = base;
        SchemeCodebooks codebooks = make_scheme_codebooks(kind, params);
        const Codebook& cb = codebooks.phase1;
        int n1 = cb.L;

        for (std::uint64_t trial = 0; trial < 20000; ++trial) {
            TrialStreams streams = trial_streams(params.seed, trial);
            int msg = static_cast<int>(
                streams.message.stream.uniform_index(trial, 0, 3));
            TrialTranscript tr = run_trial(kind, params, codebooks, msg, streams);

            REQUIRE(tr.trueMessage == msg);
            REQUIRE(tr.decision >= 0);
            REQUIRE(tr.decision < 3);
            REQUIRE((tr.errorCategory == ErrorCategory::None) ==
                    (tr.decision == msg));
            REQUIRE(tr.phase1Sent == cb.words[static_cast<size_t>(msg)]);
            REQUIRE(static_cast<int>(tr.phase1Received.size()) == n1);

            // Ranking is the distance order with ties to the lower index.
            REQUIRE(tr.receiverRanking.size() == 3);
            std::vector<int> d(3);
            for (int i = 0; i < 3; ++i)
                d[static_cast<size_t>(i)] =
                    dist(cb.words[static_cast<size_t>(i)], tr.phase1Received);
            for (size_t i = 0; i + 1 < 3; ++i) {
                int a = tr.receiverRanking[i], b = tr.receiverRanking[i + 1];
                bool ordered = d[static_cast<size_t>(a)] < d[static_cast<size_t>(b)] ||
                               (d[static_cast<size_t>(a)] == d[static_cast<size_t>(b)] && a < b);
                REQUIRE(ordered);
            }
            MessagePair top = tr.receiverRanking[0] < tr.receiverRanking[1]
                                  ? MessagePair{tr.receiverRanking[0], tr.receiverRanking[1]}
                                  : MessagePair{tr.receiverRanking[1], tr.receiverRanking[0]};
            REQUIRE(tr.receiverPair == top);

            switch (kind) {
                case SchemeKind::NoFeedbackBaseline:
                    REQUIRE(tr.caseTaken == CaseTaken::Case1);
                    REQUIRE(tr.decision == tr.receiverRanking[0]);
                    REQUIRE(tr.phase1FeedbackSeen.empty());
                    REQUIRE(tr.transmitterRanking.empty());
                    REQUIRE_FALSE(tr.transmitterPair.valid());
                    REQUIRE((tr.errorCategory == ErrorCategory::None ||
                             tr.errorCategory == ErrorCategory::P1));
                    break;
                case SchemeKind::NoiselessSwitch:
                    REQUIRE(tr.caseTaken == CaseTaken::Case2);
                    REQUIRE(tr.phase1FeedbackSeen == tr.phase1Received);
                    REQUIRE(tr.transmitterPair == tr.receiverPair);
                    REQUIRE(tr.errorCategory != ErrorCategory::P2n);
                    REQUIRE(tr.errorCategory != ErrorCategory::P3);
                    if (tr.errorCategory == ErrorCategory::P1)
                        REQUIRE_FALSE(tr.receiverPair.contains(msg));
                    if (tr.errorCategory == ErrorCategory::P2)
                        REQUIRE(tr.receiverPair.contains(msg));
                    break;
                case SchemeKind::NoisySwitch: {
                    REQUIRE(static_cast<int>(tr.phase1FeedbackSeen.size()) == n1);
                    REQUIRE(tr.transmitterRanking.size() == 3);
                    int thr = static_cast<int>(
                        std::floor(params.t * n1 / 2.0 + 1e-9));
                    bool case1 =
                        d[static_cast<size_t>(tr.receiverRanking[2])] <=
                        d[static_cast<size_t>(tr.receiverRanking[1])] + thr;
                    REQUIRE((tr.caseTaken == CaseTaken::Case1) == case1);
                    if (case1) REQUIRE(tr.decision == tr.receiverRanking[0]);
                    if (!case1)
                        REQUIRE(tr.receiverPair.contains(tr.decision));
                    REQUIRE(tr.errorCategory != ErrorCategory::P3);
                    if (tr.errorCategory == ErrorCategory::P2)
                        REQUIRE(tr.transmitterPair == tr.receiverPair);
                    if (tr.errorCategory == ErrorCategory::P2n)
                        REQUIRE_FALSE(tr.transmitterPair == tr.receiverPair);
                    break;
                }
                case SchemeKind::ActiveFeedback:
                    REQUIRE(tr.phase1FeedbackSeen.empty());
                    REQUIRE(tr.transmitterRanking.empty());
                    REQUIRE(tr.transmitterPair.valid());
                    REQUIRE(tr.errorCategory != ErrorCategory::P2n);
                    if (tr.errorCategory == ErrorCategory::P2)
                        REQUIRE_FALSE(tr.transmitterPair == tr.receiverPair);
                    if (tr.errorCategory == ErrorCategory::P3) {
                        REQUIRE(tr.transmitterPair == tr.receiverPair);
                        REQUIRE(tr.receiverPair.contains(msg));
                    }
                    break;
            }
        }
    }
}

TEST_CASE("two-message special cases", "[schemes]") {
    SchemeParams params;
    params.p = 0.3;
    params.p1 = 0.2;
    params.n = 40;
    params.M = 2;
    params.gamma = 0.5;
    params.t = 0.3;
    params.gamma1 = 0.25;
    params.seed = 5;

    // Noisy switch with M = 2: no third candidate, always Case 2, and the
    // only achievable error category is the binary-test failure.
    SchemeCodebooks noisy = make_scheme_codebooks(SchemeKind::NoisySwitch, params);
    for (std::uint64_t trial = 0; trial < 20000; ++trial) {
        TrialStreams s = trial_streams(5, trial);
        TrialTranscript tr = run_noisy_switch_trial(params, noisy.phase1,
                                                    static_cast<int>(trial % 2), s);
        REQUIRE(tr.caseTaken == CaseTaken::Case2);
        REQUIRE((tr.errorCategory == ErrorCategory::None ||
                 tr.errorCategory == ErrorCategory::P2));
    }

    // Active with M = 2: a single pair, so the report phase cannot fail.
    SchemeCodebooks active = make_scheme_codebooks(SchemeKind::ActiveFeedback, params);
    REQUIRE(active.pairCode);
    REQUIRE(active.pairCode->M == 1);
    for (std::uint64_t trial = 0; trial < 20000; ++trial) {
        TrialStreams s = trial_streams(5, trial);
        TrialTranscript tr =
            run_active_trial(params, active, static_cast<int>(trial % 2), s);
        REQUIRE((tr.transmitterPair == MessagePair{0, 1}));
        REQUIRE((tr.errorCategory == ErrorCategory::None ||
                 tr.errorCategory == ErrorCategory::P3));
    }
}

TEST_CASE("noise-free channels never err", "[schemes]") {
    SchemeParams params;
    params.p = 0.0;
    params.p1 = 0.3; // noisy feedback must not hurt when the channel is clean
    params.n = 80;
    params.M = 3;
    params.gamma = 0.75;
    params.t = 0.2;
    params.slackFraction = 0.05;
    params.seed = 31;
    SchemeCodebooks noisy = make_scheme_codebooks(SchemeKind::NoisySwitch, params);
    for (std::uint64_t trial = 0; trial < 5000; ++trial) {
        TrialStreams s = trial_streams(31, trial);
        TrialTranscript tr =
            run_noisy_switch_trial(params, noisy.phase1, static_cast<int>(trial % 3), s);
        REQUIRE(tr.errorCategory == ErrorCategory::None);
    }

    SchemeParams act = params;
    act.gamma = 0.6;
    act.gamma1 = 0.2;
    SchemeCodebooks active = make_scheme_codebooks(SchemeKind::ActiveFeedback, act);
    for (std::uint64_t trial = 0; trial < 5000; ++trial) {
        TrialStreams s = trial_streams(31, trial);
        TrialTranscript tr =
            run_active_trial(act, active, static_cast<int>(trial % 3), s);
        REQUIRE(tr.errorCategory == ErrorCategory::None);
    }
}

TEST_CASE("trial runners are deterministic in the stream coordinates", "[schemes]") {
    SchemeParams params;
    params.p = 0.25;
    params.p1 = 0.1;
    params.n = 50;
    params.M = 3;
    params.gamma = 0.6;
    params.t = 0.2;
    params.seed = 17;
    SchemeCodebooks cb = make_scheme_codebooks(SchemeKind::NoisySwitch, params);
    TrialTranscript a =
        run_noisy_switch_trial(params, cb.phase1, 1, trial_streams(17, 1234));
    TrialTranscript b =
        run_noisy_switch_trial(params, cb.phase1, 1, trial_streams(17, 1234));
    CHECK(transcript_line(a) == transcript_line(b));
    TrialTranscript c =
        run_noisy_switch_trial(params, cb.phase1, 1, trial_streams(17, 1235));
    CHECK(transcript_line(a) != transcript_line(c));
}

TEST_CASE("transcript line format", "[schemes]") {
    SchemeParams params;
    params.p = 0.2;
    params.n = 12;
    params.M = 2;
    params.seed = 3;
    SchemeCodebooks cb = make_scheme_codebooks(SchemeKind::NoFeedbackBaseline, params);
    TrialTranscript tr =
        run_no_feedback_baseline(params, cb.phase1, 1, trial_streams(3, 0));
    std::string line = transcript_line(tr);
    std::istringstream iss(line);
    std::vector<std::string> fields;
    std::string f;
    while (iss >> f) fields.push_back(f);
    REQUIRE(fields.size() == 11);
    CHECK(fields[0] == "1");
    CHECK(fields[1] == std::string(12, '1')); // complementary pair, word 1
    CHECK(fields[2].size() == 12);
    CHECK(fields[3] == "-"); // no feedback leg
    CHECK(fields[4] != "-");
    CHECK(fields[5] == "-"); // no transmitter ranking
    CHECK(fields[6] == "1"); // Case 1
    CHECK(fields[8] == "-"); // no transmitter pair
    CHECK((fields[10] == "none" || fields[10] == "P1"));
}

TEST_CASE("parameter validation", "[schemes]") {
    SchemeParams params;
    params.p = 0.2;
    params.n = 30;
    params.M = 3;
    params.gamma = 0.5;
    params.seed = 1;
    SchemeCodebooks cb = make_scheme_codebooks(SchemeKind::NoisySwitch, params);

    CHECK_THROWS_AS(
        run_noisy_switch_trial(params, cb.phase1, 3, trial_streams(1, 0)),
        std::domain_error);
    CHECK_THROWS_AS(
        run_noisy_switch_trial(params, cb.phase1, -1, trial_streams(1, 0)),
        std::domain_error);

    SchemeParams bad = params;
    bad.gamma = 1.0; // phase II collapses to zero length
    CHECK_THROWS_AS(
        run_noisy_switch_trial(bad, cb.phase1, 0, trial_streams(1, 0)),
        std::domain_error);

    SchemeParams wrongLen = params;
    wrongLen.n = 36; // codebook was built for gamma*30 = 15
    CHECK_THROWS_AS(
        run_noisy_switch_trial(wrongLen, cb.phase1, 0, trial_streams(1, 0)),
        std::domain_error);

    SchemeCodebooks noPair;
    noPair.phase1 = cb.phase1;
    SchemeParams act = params;
    act.gamma1 = 0.2;
    act.n = 30;
    act.gamma = 0.5;
    CHECK_THROWS_AS(run_active_trial(act, noPair, 0, trial_streams(1, 0)),
                    std::domain_error);
}

// ---------------------------------------------------------------------------
// Exact agreement between simulation and combinatorics on matched geometry.
// A padded three-word simplex (pad of common zeros + exact simplex) has
// pairwise distances exactly L/2 AND the exact part structure the count
// model assumes, so finite-length category probabilities are computable in
// closed form and the simulator must land within Monte Carlo error of them.

TEST_CASE("noiseless switch matches exact category probabilities",
          "[schemes][exact]") {
    const int n = 120, n1 = 60, n2 = 60, m3 = 15;
    const double p = 0.4;

    // Exact P1 (true word ranked third) and P2 (binary test failed) for
    // transmitted word x1 = all-zeros, in part-count coordinates
    // A,B,C ~ iid Bin(m3, p):
    //   d1 = A+B+C, d2 = 2m3-A-B+C, d3 = 2m3-A+B-C  (+ equal pad noise).
    double exactP1 = 0, exactP2 = 0;
    for (int A = 0; A <= m3; ++A) {
        for (int B = 0; B <= m3; ++B) {
            for (int C = 0; C <= m3; ++C) {
                double w = std::exp(log_pmf(m3, A, p) + log_pmf(m3, B, p) +
                                    log_pmf(m3, C, p));
                int d1 = A + B + C;
                int d2 = 2 * m3 - A - B + C;
                int d3 = 2 * m3 - A + B - C;
                if (d2 < d1 && d3 < d1) {
                    exactP1 += w; // pair {2,3}: truth shut out
                } else if (A + C <= m3 && B >= C) {
                    // pair {1,2}: phase II decides 2 iff W > (n2+d2-d1)/2
                    exactP2 += w * tail_gt(n2, p, (n2 + d2 - d1) / 2.0);
                } else {
                    // pair {1,3}
                    exactP2 += w * tail_gt(n2, p, (n2 + d3 - d1) / 2.0);
                }
            }
        }
    }
    // Frozen from the independent prototype of the same enumeration.
    CHECK_THAT(exactP1, WithinAbs(0.031429, 5e-6));
    CHECK_THAT(exactP2, WithinAbs(0.026966, 5e-6));

    SchemeParams params;
    params.p = p;
    params.n = n;
    params.M = 3;
    params.gamma = 0.5;
    params.seed = 2024;
    SchemeCodebooks cb;
    cb.phase1 = make_simplex3_padded(n1);

    const std::uint64_t N = 400000;
    std::uint64_t hitsP1 = 0, hitsP2 = 0;
    for (std::uint64_t trial = 0; trial < N; ++trial) {
        TrialTranscript tr = run_noiseless_switch_trial(
            params, cb.phase1, 0, trial_streams(params.seed, trial));
        hitsP1 += tr.errorCategory == ErrorCategory::P1;
        hitsP2 += tr.errorCategory == ErrorCategory::P2;
    }
    double s1 = std::sqrt(exactP1 * (1 - exactP1) / N);
    double s2 = std::sqrt(exactP2 * (1 - exactP2) / N);
    CHECK_THAT(static_cast<double>(hitsP1) / N, WithinAbs(exactP1, 3 * s1));
    CHECK_THAT(static_cast<double>(hitsP2) / N, WithinAbs(exactP2, 3 * s2));
}

TEST_CASE("pair-disagreement event rate matches the oracle",
          "[schemes][exact]") {
    // Noisy switch, truth = x1 on a padded simplex: the occurrence rate of
    //   { d(x3,y) >= d(x2,y) + thr } and { d(x3,x') <= d(x2,x') }
    // must match eventA1_probability on the matched part length.  thr is the
    // scheme's threshold in symbols; it is even here, so the count-model
    // threshold (in B - C units) is exactly thr/2.
    const int n = 80, n1 = 40;
    const double p = 0.1, p1 = 0.05, t = 0.2;
    const int thr = static_cast<int>(std::floor(t * n1 / 2.0 + 1e-9));
    REQUIRE(thr == 4);

    ExactProbability oracle = eventA1_probability(30, t, p, p1);
    double P = std::exp(oracle.logP);
    CHECK_THAT(P, WithinAbs(8.195998e-3, 1e-7));

    SchemeParams params;
    params.p = p;
    params.p1 = p1;
    params.n = n;
    params.M = 3;
    params.gamma = 0.5;
    params.t = t;
    params.seed = 4242;
    Codebook cb = make_simplex3_padded(n1);

    const std::uint64_t N = 200000;
    std::uint64_t hits = 0;
    for (std::uint64_t trial = 0; trial < N; ++trial) {
        TrialTranscript tr = run_noisy_switch_trial(params, cb, 0,
                                                    trial_streams(params.seed, trial));
        int d2r = dist(cb.words[1], tr.phase1Received);
        int d3r = dist(cb.words[2], tr.phase1Received);
        int d2t = dist(cb.words[1], tr.phase1FeedbackSeen);
        int d3t = dist(cb.words[2], tr.phase1FeedbackSeen);
        if (d3r - d2r >= thr && d3t <= d2t) ++hits;
    }
    double sigma = std::sqrt(P * (1 - P) / N);
    CHECK_THAT(static_cast<double>(hits) / N, WithinAbs(P, 3 * sigma));
}

TEST_CASE("baseline matches the exact binomial tail", "[schemes][exact]") {
    // M = 2 complementary words at distance n: with the lower index breaking
    // ties, the error probability is P(W > n/2) + P(W = n/2)/2 for uniform
    // messages, W ~ Bin(n, p).
    const int n = 40;
    const double p = 0.4;
    double exact = tail_gt(n, p, n / 2.0) + 0.5 * std::exp(log_pmf(n, n / 2, p));

    SchemeParams params;
    params.p = p;
    params.n = n;
    params.M = 2;
    params.seed = 77;
    SchemeCodebooks cb = make_scheme_codebooks(SchemeKind::NoFeedbackBaseline, params);
    REQUIRE(hamming_distance(cb.phase1.words[0], cb.phase1.words[1]) == n);

    const std::uint64_t N = 200000;
    std::uint64_t errors = 0;
    for (std::uint64_t trial = 0; trial < N; ++trial) {
        TrialStreams s = trial_streams(params.seed, trial);
        int msg = static_cast<int>(s.message.stream.uniform_index(trial, 0, 2));
        TrialTranscript tr = run_no_feedback_baseline(params, cb.phase1, msg, s);
        errors += tr.errorCategory != ErrorCategory::None;
    }
    double sigma = std::sqrt(exact * (1 - exact) / N);
    CHECK_THAT(static_cast<double>(errors) / N, WithinAbs(exact, 3 * sigma));
}
