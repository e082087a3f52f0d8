#pragma once
// Exact finite-length probabilities for the three-codeword simplex geometry.
//
// Setting: codeword x1 (all zeros on the three parts) is transmitted over
// BSC(p); x2 carries ones on parts 1-2 and x3 on parts 1 and 3, each part
// m/3 symbols long.  With A, B, C the per-part flip counts (iid Bin(m/3, p)),
// the pairwise distances to the channel output are
//   d1 = A+B+C,   d2 = 2m/3 - A - B + C,   d3 = 2m/3 - A + B - C,
// so all distance events reduce to integer constraints on (A, B, C).
//
// Operations:
//   lemma_point_probability  P(d2 = d1 + 2tm/3, d3 = d1 + 2t1m/3)
//   lemma_tail_probability   P(d2 <= d1 + 2tm/3, d3 <= d1 + 2t1m/3)
//   eventA1_probability      P(receiver prefers x2 over x3 by threshold t
//                              while the feedback view prefers x3), the
//                              pair-mismatch building block; its exponent is
//                              G2(t, p, p1)
//   lemma_f / lemma_f_max    the entropy functional f(a,t,t1) whose maximum
//                            gives the point-probability exponent:
//                            -(3/m) log P -> ln(1/(p^2 q)) - max_a f
//
// Integerization convention (shared with the simulator): inequality
// thresholds use floor(x + 1e-9); equality constraints must land on the
// integer lattice within 1e-6 or the event is empty.
//
// normalizedExponent is -(3/m) logP for the lemma operations (their natural
// scale is the part length m/3) and -(1/m) logP for eventA1_probability
// (log P(A1) = -G2 m + o(m), no factor 3).

#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "bscfb/exponents.hpp"
#include "bscfb/logsum.hpp"
#include "bscfb/rootfind.hpp"

namespace bscfb {

struct ExactProbability {
    double logP = kNegInf;             // natural-log probability, <= 0
    int m = 0;                         // total simplex length (3 parts)
    double normalizedExponent = 0;     // see header comment for the scale
    bool feasible = true;              // false: structurally empty event
                                       // (off-lattice constraint, or noiseless
                                       // feedback with t > 0)
};

namespace detail {

inline int require_m3(int m) {
    if (m <= 0 || m % 3 != 0)
        throw std::domain_error("oracle: m must be a positive multiple of 3");
    return m / 3;
}

// Equality thresholds must hit the lattice; returns false if t*m3 is not an
// integer (within 1e-6), in which case the point event is empty.
inline bool lattice_count(double t, int m3, int* out) {
    double x = t * m3;
    double r = std::nearbyint(x);
    if (std::abs(x - r) > 1e-6) return false;
    *out = static_cast<int>(r);
    return true;
}

// Inequality thresholds: floor with a tiny nudge absorbing representation
// error (0.3 * 10 = 2.9999... must give 3, while a genuine 2.9 gives 2).
inline int floor_count(double x) { return static_cast<int>(std::floor(x + 1e-9)); }

inline ExactProbability empty_event(int m) {
    ExactProbability r;
    r.logP = kNegInf;
    r.m = m;
    r.normalizedExponent = std::numeric_limits<double>::infinity();
    r.feasible = false;
    return r;
}

inline ExactProbability finish(int m, double logP, double scale) {
    ExactProbability r;
    r.logP = logP;
    r.m = m;
    r.feasible = logP != kNegInf;
    r.normalizedExponent = r.feasible ? -scale * logP / m
                                      : std::numeric_limits<double>::infinity();
    return r;
}

} // namespace detail

// P(A+B = m/3 - T, A+C = m/3 - T1) with T = t*m/3, T1 = t1*m/3, i.e. the
// point event {d2 = d1 + 2tm/3, d3 = d1 + 2t1m/3}.  t and t1 may be negative
// (x1 beaten); |t|, |t1| <= 1.
inline ExactProbability lemma_point_probability(int m, double t, double t1, double p) {
    int m3 = detail::require_m3(m);
    if (!(p > 0.0 && p < 1.0))
        throw std::domain_error("lemma_point_probability: p outside (0,1)");
    int T, T1;
    if (!detail::lattice_count(t, m3, &T) || !detail::lattice_count(t1, m3, &T1))
        return detail::empty_event(m);
    // B and C are exchangeable, so the probability is symmetric in (T, T1);
    // evaluating in a canonical order makes that symmetry bitwise exact.
    if (T1 < T) std::swap(T, T1);
    LogFactorial lf(m3);
    double lp = std::log(p), lq = std::log1p(-p);
    double acc = kNegInf;
    for (int A = 0; A <= m3; ++A) {
        int B = m3 - T - A;
        int C = m3 - T1 - A;
        if (B < 0 || B > m3 || C < 0 || C > m3) continue;
        int s = A + B + C;
        acc = log_add(acc, lf.log_binomial(m3, A) + lf.log_binomial(m3, B) +
                               lf.log_binomial(m3, C) + s * lp + (3 * m3 - s) * lq);
    }
    return detail::finish(m, acc, 3.0);
}

// P(A+B >= m/3 - T, A+C >= m/3 - T1): the tail event
// {d2 <= d1 + 2tm/3, d3 <= d1 + 2t1m/3}.
inline ExactProbability lemma_tail_probability(int m, double t, double t1, double p) {
    int m3 = detail::require_m3(m);
    if (!(p > 0.0 && p < 1.0))
        throw std::domain_error("lemma_tail_probability: p outside (0,1)");
    int T = detail::floor_count(t * m3);
    int T1 = detail::floor_count(t1 * m3);
    if (T1 < T) std::swap(T, T1); // exchange symmetry, bitwise (see above)
    LogFactorial lf(m3);
    std::vector<double> lpmf = binomial_log_pmf(lf, m3, p);
    std::vector<double> ltail = suffix_log_tails(lpmf);
    double acc = kNegInf;
    for (int A = 0; A <= m3; ++A) {
        int bmin = std::max(0, m3 - T - A);
        int cmin = std::max(0, m3 - T1 - A);
        if (bmin > m3 || cmin > m3) continue;
        acc = log_add(acc, lpmf[static_cast<size_t>(A)] +
                               ltail[static_cast<size_t>(bmin)] +
                               ltail[static_cast<size_t>(cmin)]);
    }
    return detail::finish(m, acc, 3.0);
}

// Pair-mismatch building block.  In part coordinates the event is
//   { B >= C + T }  and  { C1+C2 >= B1+B2 },
// where B, C ~ Bin(m/3, p) are the forward flip counts on parts 2 and 3, and
// given (B, C) the feedback re-flips make the transmitter's view of the part
// ones-counts  B1+B2 with B1 ~ Bin(B, q1), B2 ~ Bin(m/3-B, p1)  (likewise C).
// The first condition is d(x3,y) >= d(x2,y) + t*(2m/3) at the receiver, the
// second d(x3,x') <= d(x2,x') at the transmitter.
//
// Exact computation: outer sum over (B, C); the inner comparison uses the
// exact distribution of W_v = Bin(v, q1) + Bin(m/3-v, p1) obtained by
// discrete convolution, then a suffix-tail sum.  O((m/3)^3) overall.
//
// With p1 = 0 the transmitter sees y exactly, the second condition becomes
// B <= C, and the event is empty for t > 0 (hence G2(t,p,0) = +infinity);
// at t = 0 it degenerates to P(B = C).
inline ExactProbability eventA1_probability(int m, double t, double p, double p1) {
    int m3 = detail::require_m3(m);
    if (!(p > 0.0 && p < 1.0))
        throw std::domain_error("eventA1_probability: p outside (0,1)");
    if (!(p1 >= 0.0 && p1 <= 0.5))
        throw std::domain_error("eventA1_probability: p1 outside [0, 1/2]");
    if (!(t >= 0.0))
        throw std::domain_error("eventA1_probability: t must be non-negative");
    // Threshold in count units: d3 - d2 = 2(B - C) >= floor(2 t m/3) symbols.
    int Tsym = detail::floor_count(2.0 * t * m3);
    int T = (Tsym + 1) / 2; // ceil(Tsym / 2)
    LogFactorial lf(m3);
    std::vector<double> lpmf = binomial_log_pmf(lf, m3, p);

    if (p1 == 0.0) {
        if (T > 0) return detail::empty_event(m);
        double acc = kNegInf; // P(B = C)
        for (int k = 0; k <= m3; ++k)
            acc = log_add(acc, 2.0 * lpmf[static_cast<size_t>(k)]);
        return detail::finish(m, acc, 1.0);
    }

    // dist[v][k] = log P(W_v = k); tails[v][k] = log P(W_v >= k).
    size_t n1 = static_cast<size_t>(m3) + 1;
    std::vector<std::vector<double>> dist(n1), tails(n1);
    double lq1 = std::log1p(-p1), lp1 = std::log(p1);
    for (int v = 0; v <= m3; ++v) {
        std::vector<double> d1(static_cast<size_t>(v) + 1);
        std::vector<double> d2(static_cast<size_t>(m3 - v) + 1);
        for (int j = 0; j <= v; ++j)
            d1[static_cast<size_t>(j)] = lf.log_binomial(v, j) + j * lq1 + (v - j) * lp1;
        for (int j = 0; j <= m3 - v; ++j)
            d2[static_cast<size_t>(j)] =
                lf.log_binomial(m3 - v, j) + j * lp1 + (m3 - v - j) * lq1;
        std::vector<double>& dv = dist[static_cast<size_t>(v)];
        dv.assign(n1, kNegInf);
        for (int k = 0; k <= m3; ++k) {
            int jlo = std::max(0, k - (m3 - v));
            int jhi = std::min(v, k);
            double acc = kNegInf;
            for (int j = jlo; j <= jhi; ++j)
                acc = log_add(acc, d1[static_cast<size_t>(j)] +
                                       d2[static_cast<size_t>(k - j)]);
            dv[static_cast<size_t>(k)] = acc;
        }
        tails[static_cast<size_t>(v)] = suffix_log_tails(dv);
    }

    double acc = kNegInf;
    for (int B = 0; B <= m3; ++B) {
        for (int C = 0; C <= m3; ++C) {
            if (B - C < T) continue;
            // log P(W_C >= W_B | B, C)
            const std::vector<double>& db = dist[static_cast<size_t>(B)];
            const std::vector<double>& tc = tails[static_cast<size_t>(C)];
            double inner = kNegInf;
            for (int k = 0; k <= m3; ++k)
                inner = log_add(inner, db[static_cast<size_t>(k)] +
                                           tc[static_cast<size_t>(k)]);
            acc = log_add(acc, lpmf[static_cast<size_t>(B)] +
                                   lpmf[static_cast<size_t>(C)] + inner);
        }
    }
    return detail::finish(m, acc, 1.0);
}

// f(a, t, t1) = h(a) + h(a+t) + h(a+t1) + (a+t+t1) ln z,  z = q/p.
inline double lemma_f(double a, double t, double t1, double p) {
    detail::require_open_p(p, "lemma_f");
    if (!(a >= 0.0 && a <= 1.0) || !(a + t >= 0.0 && a + t <= 1.0) ||
        !(a + t1 >= 0.0 && a + t1 <= 1.0))
        throw std::domain_error("lemma_f: entropy argument outside [0,1]");
    double z = (1.0 - p) / p;
    return detail::h(a) + detail::h(a + t) + detail::h(a + t1) +
           (a + t + t1) * std::log(z);
}

// max_a f(a, t, t1): f is strictly concave in a with derivative
//   f'_a = ln((1-a)/a) + ln((1-a-t)/(a+t)) + ln((1-a-t1)/(a+t1)) + ln z,
// which runs from +infinity to -infinity across the feasible interval, so the
// stationary point is interior and unique.
inline double lemma_f_max(double t, double t1, double p) {
    detail::require_open_p(p, "lemma_f_max");
    double z = (1.0 - p) / p;
    double lo = std::max({0.0, -t, -t1}) + 1e-15;
    double hi = std::min({1.0, 1.0 - t, 1.0 - t1}) - 1e-15;
    if (!(lo < hi))
        throw std::domain_error("lemma_f_max: empty feasible interval");
    auto fp = [&](double a) {
        return std::log((1.0 - a) / a) + std::log((1.0 - a - t) / (a + t)) +
               std::log((1.0 - a - t1) / (a + t1)) + std::log(z);
    };
    double a = find_root(fp, lo, hi, 1e-14);
    return lemma_f(a, t, t1, p);
}

} // namespace bscfb
