// Large-blocklength behavior of the simulated schemes.
//
// Two regimes are covered.  At p near 1/2 the exponents are small enough that
// desk-scale Monte Carlo observes errors, so slope ladders can be compared
// against the asymptotic exponent quantitatively.  At moderate p the stated
// operating points have error probabilities far below anything observable
// (e.g. 1e-100 and smaller); there the honest check is that the exact error
// bound is astronomically small AND that the simulation indeed observes zero
// errors, which is exactly the 3-sigma band around the true value.

#include <cmath>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include "bscfb/bscfb.hpp"

namespace {

// log P(Bin(d, p) >= d/2): upper bound on the pairwise error between two
// codewords at Hamming distance d under minimum-distance decoding, whatever
// the tie-break rule.
double log_pairwise_error_bound(const bscfb::LogFactorial& lf, int d, double p) {
    return bscfb::log_binomial_tail_gt(lf, d, p, d / 2.0 - 1.0 + 0.5);
}

} // namespace

TEST_CASE("noisy switch slope ladder approaches the noisy-feedback exponent") {
    // Near p = 1/2 the exponent is ~2.6e-3 nats, so n in the low thousands
    // produces measurable error rates while the asymptotics already bite.
    bscfb::ExponentReport r = bscfb::exponent_F1(0.45, 0.02);
    REQUIRE(r.F1 > r.E); // p1 = 0.02 is far below p0(0.45) ~ 0.066

    bscfb::SchemeParams base;
    base.p = 0.45;
    base.p1 = 0.02;
    base.M = 3;
    base.gamma = r.gammaStar;
    base.t = r.tStar;

    std::vector<bscfb::SlopePoint> ladder = bscfb::slope_ladder(
        bscfb::SchemeKind::NoisySwitch, base, {600, 1200, 2400}, 120000, 11);
    REQUIRE(ladder.size() == 3);

    for (const bscfb::SlopePoint& pt : ladder) {
        INFO("n=" << pt.n << " errors=" << pt.errors << " slope=" << pt.slope);
        CHECK(pt.reliable);
        // Finite-n slopes sit above the asymptote here: the dominant error
        // events carry subexponential prefactors below one, so -ln(rate)/n
        // overshoots the exponent and decays onto it from above.
        CHECK(pt.slope > r.F1);
        CHECK(pt.slopeLo <= pt.slope);
        CHECK(pt.slope <= pt.slopeHi);
    }
    CHECK(ladder[0].slope > ladder[1].slope);
    CHECK(ladder[1].slope > ladder[2].slope);

    double gap0 = ladder[0].slope - r.F1;
    double gap1 = ladder[1].slope - r.F1;
    double gap2 = ladder[2].slope - r.F1;
    CHECK(gap0 > gap1);
    CHECK(gap1 > gap2);
    CHECK(gap2 < 1e-3); // within ~0.001 nats of F1 = 0.00258 by n = 2400
}

TEST_CASE("two-message switch at n=2000 matches its exact binomial error") {
    bscfb::SchemeParams params;
    params.p = 0.05;
    params.n = 2000;
    params.M = 2;
    params.gamma = 0.5;
    params.seed = 2026;

    bscfb::SchemeCodebooks cb =
        bscfb::make_scheme_codebooks(bscfb::SchemeKind::NoiselessSwitch, params);
    int n1 = bscfb::detail::phase_length(params.gamma, params.n);
    int n2 = params.n - n1;
    int d01 = bscfb::hamming_distance(cb.phase1.words[0], cb.phase1.words[1]);
    // The two full hypothesis sequences differ on the d01 phase-I positions
    // plus all n2 complementary phase-II positions.
    int D = d01 + n2;

    bscfb::LogFactorial lf(D);
    double logExact;
    if (D % 2 == 1) {
        logExact = bscfb::log_binomial_tail_gt(lf, D, params.p, (D - 1) / 2.0);
    } else {
        // Ties at exactly D/2 flips resolve toward message 0, so under a
        // uniform message they contribute half their probability.
        std::vector<double> pmf = bscfb::binomial_log_pmf(lf, D, params.p);
        logExact = bscfb::log_add(
            bscfb::log_binomial_tail_gt(lf, D, params.p, D / 2.0),
            pmf[static_cast<size_t>(D / 2)] - std::log(2.0));
    }
    // At p = 0.05 and D ~ 1500 the exact error is below 1e-200.
    CHECK(logExact < std::log(1e-200));

    const std::uint64_t trials = 3000;
    bscfb::SimulationSummary s = bscfb::estimate(
        bscfb::SchemeKind::NoiselessSwitch, params, trials, params.seed, 1);
    // trials * exact <= 9 means "zero observed errors" IS the 3-sigma band.
    CHECK(logExact + std::log(static_cast<double>(trials)) < std::log(9.0));
    CHECK(s.totalErrors == 0);
}

TEST_CASE("three-message switch at n=1200 with the optimal split never errs") {
    bscfb::ExponentReport r = bscfb::exponent_F1(0.1, 0.0);
    bscfb::SchemeParams params;
    params.p = 0.1;
    params.n = 1200;
    params.M = 3;
    params.gamma = r.gammaStar;
    params.seed = 515;

    bscfb::SchemeCodebooks cb =
        bscfb::make_scheme_codebooks(bscfb::SchemeKind::NoiselessSwitch, params);
    int n1 = bscfb::detail::phase_length(params.gamma, params.n);
    int n2 = params.n - n1;
    int d01 = bscfb::hamming_distance(cb.phase1.words[0], cb.phase1.words[1]);
    int d02 = bscfb::hamming_distance(cb.phase1.words[0], cb.phase1.words[2]);
    int d12 = bscfb::hamming_distance(cb.phase1.words[1], cb.phase1.words[2]);

    bscfb::LogFactorial lf(n1 + n2);
    // Union bounds per category: a ranking failure needs some wrong codeword
    // at least as close as the true one after phase I; a phase-II failure is
    // a two-sequence test over d_pair + n2 differing positions.
    double logP1Bound = bscfb::kNegInf;
    double logP2Bound = bscfb::kNegInf;
    for (int d : {d01, d02, d12}) {
        logP1Bound = bscfb::log_add(
            logP1Bound, std::log(2.0) + log_pairwise_error_bound(lf, d, params.p));
        logP2Bound = bscfb::log_add(
            logP2Bound, log_pairwise_error_bound(lf, d + n2, params.p));
    }
    CHECK(logP1Bound < std::log(1e-80));
    CHECK(logP2Bound < std::log(1e-80));

    const std::uint64_t trials = 3000;
    bscfb::SimulationSummary s = bscfb::estimate(
        bscfb::SchemeKind::NoiselessSwitch, params, trials, params.seed, 1);
    CHECK(logP1Bound + std::log(static_cast<double>(trials)) < std::log(9.0));
    for (std::uint64_t count : s.errorsByCategory) CHECK(count == 0);
    CHECK(s.totalErrors == 0);
}

TEST_CASE("active scheme at n=1500 with the optimal split never errs") {
    bscfb::ActiveExponent a = bscfb::exponent_active(0.1, 0.1);
    bscfb::SchemeParams params;
    params.p = 0.1;
    params.p1 = 0.1;
    params.n = 1500;
    params.M = 3;
    params.gamma = a.gamma;
    params.gamma1 = a.gamma1;
    params.seed = 909;

    bscfb::SchemeCodebooks cb =
        bscfb::make_scheme_codebooks(bscfb::SchemeKind::ActiveFeedback, params);
    REQUIRE(cb.pairCode.has_value());
    int n1 = bscfb::detail::phase_length(params.gamma, params.n);
    int n2 = bscfb::detail::phase_length(params.gamma1, params.n);
    int n3 = params.n - n1 - n2;
    REQUIRE(n3 > 0);

    bscfb::LogFactorial lf(params.n);
    double logP1Bound = bscfb::kNegInf; // phase-I ranking failure
    double logP2Bound = bscfb::kNegInf; // feedback pair-report misdecoded
    double logP3Bound = bscfb::kNegInf; // final two-sequence test failure
    for (int i = 0; i < 3; ++i) {
        for (int j = i + 1; j < 3; ++j) {
            int dI = bscfb::hamming_distance(cb.phase1.words[i], cb.phase1.words[j]);
            int dF = bscfb::hamming_distance(cb.pairCode->words[i], cb.pairCode->words[j]);
            logP1Bound = bscfb::log_add(
                logP1Bound, std::log(2.0) + log_pairwise_error_bound(lf, dI, params.p));
            logP2Bound = bscfb::log_add(
                logP2Bound, std::log(2.0) + log_pairwise_error_bound(lf, dF, params.p1));
            logP3Bound = bscfb::log_add(
                logP3Bound, log_pairwise_error_bound(lf, dI + n3, params.p));
        }
    }
    CHECK(logP1Bound < std::log(1e-60));
    CHECK(logP2Bound < std::log(1e-30));
    CHECK(logP3Bound < std::log(1e-80));
    double logTotalBound =
        bscfb::log_add(logP1Bound, bscfb::log_add(logP2Bound, logP3Bound));

    const std::uint64_t trials = 2000;
    bscfb::SimulationSummary s = bscfb::estimate(
        bscfb::SchemeKind::ActiveFeedback, params, trials, params.seed, 1);
    CHECK(logTotalBound + std::log(static_cast<double>(trials)) < std::log(9.0));
    CHECK(s.totalErrors == 0);
}

TEST_CASE("noisy switch with near-noiseless feedback behaves like the noiseless one") {
    bscfb::ExponentReport r = bscfb::exponent_F1(0.1, 0.0);

    bscfb::SchemeParams noiseless;
    noiseless.p = 0.1;
    noiseless.n = 1200;
    noiseless.M = 3;
    noiseless.gamma = r.gammaStar;
    noiseless.seed = 41;

    bscfb::SchemeParams noisy = noiseless;
    noisy.p1 = 1e-9;
    noisy.t = 0.0;

    // Same gamma, M, n and seed: both runners draw the identical phase-I
    // codebook and identical forward noise; the feedback stream is separate,
    // so enabling it does not perturb the forward realizations.
    bscfb::SchemeCodebooks cbA =
        bscfb::make_scheme_codebooks(bscfb::SchemeKind::NoiselessSwitch, noiseless);
    bscfb::SchemeCodebooks cbB =
        bscfb::make_scheme_codebooks(bscfb::SchemeKind::NoisySwitch, noisy);
    REQUIRE(cbA.phase1.words == cbB.phase1.words);

    int mismatchedPairs = 0;
    for (std::uint64_t trial = 0; trial < 2000; ++trial) {
        bscfb::TrialStreams sA = bscfb::trial_streams(noiseless.seed, trial);
        bscfb::TrialStreams sB = bscfb::trial_streams(noisy.seed, trial);
        int msg = static_cast<int>(sA.message.stream.uniform_index(trial, 0, 3));

        bscfb::TrialTranscript a = bscfb::run_trial(
            bscfb::SchemeKind::NoiselessSwitch, noiseless, cbA, msg, sA);
        bscfb::TrialTranscript b =
            bscfb::run_trial(bscfb::SchemeKind::NoisySwitch, noisy, cbB, msg, sB);

        REQUIRE(a.phase1Received == b.phase1Received);
        // At n = 1200, p = 0.1 the error probability is ~1e-250: both
        // schemes decide the true message on every desk-scale trial, and the
        // pair-mismatch category never fires with 1e-9 feedback noise.
        REQUIRE(a.decision == msg);
        REQUIRE(b.decision == msg);
        REQUIRE(a.errorCategory == bscfb::ErrorCategory::None);
        REQUIRE(b.errorCategory == bscfb::ErrorCategory::None);
        if (b.receiverPair != b.transmitterPair) ++mismatchedPairs;
    }
    CHECK(mismatchedPairs == 0);
}
