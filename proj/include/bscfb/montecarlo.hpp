#pragma once
// Monte Carlo estimation of scheme error rates.
//
// Reproducibility contract: the outcome of trial i is a pure function of
// (seed, i), independent of thread count or scheduling, and category counts
// are integers, so a run's summary is bitwise identical for any `threads`
// value.  estimate() overrides params.seed with its own seed argument so a
// single value controls codebook generation and noise.
//
// Interval caveat: Wilson intervals are reported for every count, but with
// fewer than 20 observed errors the summary is flagged unreliable; treat
// such intervals as order-of-magnitude only.  Rare-event regimes (large n,
// small p) need importance sampling, which this driver does not attempt;
// slope ladders should be parameterized so the target rates stay above
// ~20/trials.

#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "bscfb/schemes.hpp"

namespace bscfb {

// %.12g rendering used for all CSV numeric output.
inline std::string fmt12(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return buf;
}

// JSON value for a double; infinities become the strings "inf"/"-inf"
// (JSON has no literal for them).
inline nlohmann::json json_real(double x) {
    if (std::isfinite(x)) return x;
    if (std::isnan(x)) return nullptr;
    return x > 0 ? "inf" : "-inf";
}

struct WilsonInterval {
    double lo = 0;
    double hi = 0;
};

// 95% Wilson score interval for k successes in n Bernoulli trials.
// Preferred over the Wald interval for its behavior at k = 0 and small k.
inline WilsonInterval wilson_interval(std::uint64_t k, std::uint64_t n) {
    if (n == 0) throw std::domain_error("wilson_interval: n must be positive");
    if (k > n) throw std::domain_error("wilson_interval: k exceeds n");
    const double z = 1.959963984540054; // 97.5% normal quantile
    const double nn = static_cast<double>(n);
    const double phat = static_cast<double>(k) / nn;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / nn;
    const double center = (phat + z2 / (2.0 * nn)) / denom;
    const double half =
        (z / denom) * std::sqrt(phat * (1.0 - phat) / nn + z2 / (4.0 * nn * nn));
    WilsonInterval w;
    w.lo = std::max(0.0, center - half);
    w.hi = std::min(1.0, center + half);
    // At the boundary counts the limits are exact; clear rounding residue.
    if (k == 0) w.lo = 0.0;
    if (k == n) w.hi = 1.0;
    return w;
}

inline constexpr std::array<ErrorCategory, 4> kErrorCategories = {
    ErrorCategory::P1, ErrorCategory::P2, ErrorCategory::P2n, ErrorCategory::P3};

struct SimulationSummary {
    SchemeKind scheme = SchemeKind::NoFeedbackBaseline;
    SchemeParams params;
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
    std::array<std::uint64_t, 4> errorsByCategory{}; // P1, P2, P2n, P3
    std::uint64_t totalErrors = 0;
    double errorRate = 0;
    WilsonInterval totalInterval;
    std::array<WilsonInterval, 4> categoryIntervals{};
    bool reliable = false; // >= 20 total errors observed
};

namespace detail {

inline int category_slot(ErrorCategory c) {
    switch (c) {
        case ErrorCategory::P1: return 0;
        case ErrorCategory::P2: return 1;
        case ErrorCategory::P2n: return 2;
        case ErrorCategory::P3: return 3;
        case ErrorCategory::None: break;
    }
    return -1;
}

inline std::array<std::uint64_t, 4> count_errors(SchemeKind kind,
                                                 const SchemeParams& params,
                                                 const SchemeCodebooks& codebooks,
                                                 std::uint64_t seed,
                                                 std::uint64_t first,
                                                 std::uint64_t last) {
    std::array<std::uint64_t, 4> counts{};
    for (std::uint64_t i = first; i < last; ++i) {
        TrialStreams streams = trial_streams(seed, i);
        int msg = static_cast<int>(streams.message.stream.uniform_index(
            streams.message.trial, 0, static_cast<std::uint64_t>(params.M)));
        TrialTranscript tr = run_trial(kind, params, codebooks, msg, streams);
        int slot = category_slot(tr.errorCategory);
        if (slot >= 0) ++counts[static_cast<size_t>(slot)];
    }
    return counts;
}

} // namespace detail

inline SimulationSummary estimate(SchemeKind kind, SchemeParams params,
                                  std::uint64_t trials, std::uint64_t seed,
                                  unsigned threads = 0) {
    if (trials == 0) throw std::domain_error("estimate: need at least one trial");
    params.seed = seed;
    SchemeCodebooks codebooks = make_scheme_codebooks(kind, params);

    if (threads == 0) {
        unsigned hw = std::thread::hardware_concurrency();
        threads = hw ? hw : 1;
    }
    if (static_cast<std::uint64_t>(threads) > trials)
        threads = static_cast<unsigned>(trials);

    std::array<std::uint64_t, 4> counts{};
    if (threads <= 1) {
        counts = detail::count_errors(kind, params, codebooks, seed, 0, trials);
    } else {
        std::vector<std::array<std::uint64_t, 4>> partial(threads);
        std::vector<std::thread> workers;
        workers.reserve(threads);
        const std::uint64_t chunk = trials / threads;
        const std::uint64_t rem = trials % threads;
        std::uint64_t begin = 0;
        for (unsigned w = 0; w < threads; ++w) {
            std::uint64_t len = chunk + (w < rem ? 1 : 0);
            std::uint64_t end = begin + len;
            workers.emplace_back([&, w, begin, end]() {
                partial[w] = detail::count_errors(kind, params, codebooks, seed,
                                                  begin, end);
            });
            begin = end;
        }
        for (auto& th : workers) th.join();
        for (const auto& c : partial)
            for (size_t j = 0; j < 4; ++j) counts[j] += c[j];
    }

    SimulationSummary s;
    s.scheme = kind;
    s.params = params;
    s.trials = trials;
    s.seed = seed;
    s.errorsByCategory = counts;
    s.totalErrors = counts[0] + counts[1] + counts[2] + counts[3];
    s.errorRate = static_cast<double>(s.totalErrors) / static_cast<double>(trials);
    s.totalInterval = wilson_interval(s.totalErrors, trials);
    for (size_t j = 0; j < 4; ++j)
        s.categoryIntervals[j] = wilson_interval(counts[j], trials);
    s.reliable = s.totalErrors >= 20;
    return s;
}

// One rung of an error-exponent ladder: the empirical slope -ln(rate)/n with
// the Wilson interval mapped through the same transform (high rate -> low
// slope).  rate = 0 yields an infinite slope point estimate and upper bound.
struct SlopePoint {
    int n = 0;
    std::uint64_t trials = 0;
    std::uint64_t errors = 0;
    double rate = 0;
    WilsonInterval rateInterval;
    double slope = 0;
    double slopeLo = 0;
    double slopeHi = 0;
    bool reliable = false;
};

inline std::vector<SlopePoint> slope_ladder(SchemeKind kind, SchemeParams base,
                                            const std::vector<int>& nLadder,
                                            std::uint64_t trials, std::uint64_t seed,
                                            unsigned threads = 0) {
    std::vector<SlopePoint> out;
    out.reserve(nLadder.size());
    auto slope_of = [](double rate, int n) {
        return rate > 0 ? -std::log(rate) / n
                        : std::numeric_limits<double>::infinity();
    };
    for (int n : nLadder) {
        SchemeParams params = base;
        params.n = n;
        SimulationSummary s = estimate(kind, params, trials, seed, threads);
        SlopePoint pt;
        pt.n = n;
        pt.trials = trials;
        pt.errors = s.totalErrors;
        pt.rate = s.errorRate;
        pt.rateInterval = s.totalInterval;
        pt.slope = slope_of(s.errorRate, n);
        pt.slopeLo = slope_of(s.totalInterval.hi, n);
        pt.slopeHi = slope_of(s.totalInterval.lo, n);
        pt.reliable = s.reliable;
        out.push_back(pt);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Serialization.  All rates and exponents are dimensionless or in nats.

inline nlohmann::json summary_to_json(const SimulationSummary& s) {
    nlohmann::json j;
    j["scheme"] = scheme_name(s.scheme);
    j["trials"] = s.trials;
    j["seed"] = s.seed;
    j["params"] = {
        {"p", s.params.p},         {"p1", s.params.p1},
        {"n", s.params.n},         {"M", s.params.M},
        {"gamma", s.params.gamma}, {"t", s.params.t},
        {"gamma1", s.params.gamma1},
        {"slackFraction", s.params.slackFraction},
    };
    nlohmann::json cats;
    for (size_t j2 = 0; j2 < 4; ++j2) {
        cats[category_name(kErrorCategories[j2])] = {
            {"count", s.errorsByCategory[j2]},
            {"wilsonLo", s.categoryIntervals[j2].lo},
            {"wilsonHi", s.categoryIntervals[j2].hi},
        };
    }
    j["errors"] = cats;
    j["totalErrors"] = s.totalErrors;
    j["errorRate"] = s.errorRate;
    j["wilsonLo"] = s.totalInterval.lo;
    j["wilsonHi"] = s.totalInterval.hi;
    j["reliable"] = s.reliable;
    return j;
}

inline std::string summary_csv_header() {
    return "# rates dimensionless, intervals 95% Wilson\n"
           "scheme,p,p1,n,M,gamma,t,gamma1,trials,seed,"
           "errorsP1,errorsP2,errorsP2n,errorsP3,totalErrors,"
           "errorRate,wilsonLo,wilsonHi,reliable";
}

inline std::string summary_csv_row(const SimulationSummary& s) {
    std::string r;
    r += scheme_name(s.scheme);
    r += ',';
    r += fmt12(s.params.p) + ',' + fmt12(s.params.p1) + ',';
    r += std::to_string(s.params.n) + ',' + std::to_string(s.params.M) + ',';
    r += fmt12(s.params.gamma) + ',' + fmt12(s.params.t) + ',' +
         fmt12(s.params.gamma1) + ',';
    r += std::to_string(s.trials) + ',' + std::to_string(s.seed) + ',';
    for (size_t j = 0; j < 4; ++j) r += std::to_string(s.errorsByCategory[j]) + ',';
    r += std::to_string(s.totalErrors) + ',';
    r += fmt12(s.errorRate) + ',' + fmt12(s.totalInterval.lo) + ',' +
         fmt12(s.totalInterval.hi) + ',';
    r += s.reliable ? "1" : "0";
    return r;
}

inline nlohmann::json ladder_to_json(const std::vector<SlopePoint>& ladder) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& pt : ladder) {
        arr.push_back({
            {"n", pt.n},
            {"trials", pt.trials},
            {"errors", pt.errors},
            {"rate", pt.rate},
            {"rateLo", pt.rateInterval.lo},
            {"rateHi", pt.rateInterval.hi},
            {"slope", json_real(pt.slope)},
            {"slopeLo", json_real(pt.slopeLo)},
            {"slopeHi", json_real(pt.slopeHi)},
            {"reliable", pt.reliable},
        });
    }
    return arr;
}

inline std::string ladder_csv_header() {
    return "# slopes in nats per symbol, intervals 95% Wilson\n"
           "n,trials,errors,rate,rateLo,rateHi,slope,slopeLo,slopeHi,reliable";
}

inline std::string ladder_csv_row(const SlopePoint& pt) {
    std::string r;
    r += std::to_string(pt.n) + ',' + std::to_string(pt.trials) + ',' +
         std::to_string(pt.errors) + ',';
    r += fmt12(pt.rate) + ',' + fmt12(pt.rateInterval.lo) + ',' +
         fmt12(pt.rateInterval.hi) + ',';
    r += fmt12(pt.slope) + ',' + fmt12(pt.slopeLo) + ',' + fmt12(pt.slopeHi) + ',';
    r += pt.reliable ? "1" : "0";
    return r;
}

} // namespace bscfb
