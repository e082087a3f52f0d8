#pragma once
// Zero-rate error exponents of a BSC(p) with a passive BSC(p1) feedback link.
//
// All values are in nats per channel symbol.  The exponent family:
//   E(p)  = (1/4) ln(1/(4pq))          two-codeword (Plotkin) exponent
//   E2(p) = 2 E(p)
//   F(p)  = -ln(p^{1/3} q^{2/3} + q^{1/3} p^{2/3})   three-codeword exponent
//   G1(t,p)      exponent of the "three codewords within threshold t" event
//   G2(t,p,p1)   exponent of the transmitter/receiver pair-mismatch event
//   F1(p,p1)     best achievable exponent of the one-switch scheme, obtained
//                by maximizing min{G1,G2} over the threshold fraction t and
//                optimizing the phase-I fraction gamma
//   p0(p)        largest feedback noise for which F1 beats E: unique root of
//                3 G2(1/2-p, p, p0) = ln(1/(4pq))
//   active exponent   three-phase scheme where the receiver codes its
//                     candidate pair back over the feedback channel
//
// G1 is non-increasing and G2 non-decreasing in t, so min{G1,G2} is unimodal
// and the maximum sits at the G1=G2 crossing (or an endpoint).

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "bscfb/rootfind.hpp"

namespace bscfb {

struct ExponentReport {
    double E = 0;
    double E2 = 0;
    double F = 0;
    double F1 = 0;
    double tStar = 0;      // maximizing threshold fraction in [0, 1/2-p]
    double gammaStar = 0;  // matching phase-I fraction 8E/(3*min+4E)
    double p0 = 0;         // feedback-noise threshold for this p
    double G1AtTStar = 0;
    double G2AtTStar = 0;  // +infinity when p1 == 0 (pair mismatch impossible)
};

struct ActiveExponent {
    double value = 0;  // E / (1/2 + 2E/(3F) + E/E(p1))
    double gamma = 0;  // phase-I fraction
    double gamma1 = 0; // phase-II (feedback report) fraction; gamma+gamma1 < 1
};

inline double binary_entropy(double x) {
    if (!(x >= 0.0 && x <= 1.0))
        throw std::domain_error("binary_entropy: argument outside [0,1]");
    if (x == 0.0 || x == 1.0) return 0.0;
    return -x * std::log(x) - (1.0 - x) * std::log(1.0 - x);
}

namespace detail {
// Entropy without the domain guard, for optimizer internals whose arguments
// are in [0,1] by construction (up to rounding).
inline double h(double x) {
    if (x <= 0.0 || x >= 1.0) return 0.0;
    return -x * std::log(x) - (1.0 - x) * std::log(1.0 - x);
}

inline void require_open_p(double p, const char* who) {
    if (!(p > 0.0) || !(p < 0.5))
        throw std::domain_error(std::string(who) + ": crossover must lie in (0, 1/2)");
}
} // namespace detail

inline double exponent_E(double p) {
    detail::require_open_p(p, "exponent_E");
    return 0.25 * std::log(1.0 / (4.0 * p * (1.0 - p)));
}

inline double exponent_E2(double p) {
    detail::require_open_p(p, "exponent_E2");
    return 0.5 * std::log(1.0 / (4.0 * p * (1.0 - p)));
}

inline double exponent_F(double p) {
    detail::require_open_p(p, "exponent_F");
    double q = 1.0 - p;
    return -std::log(std::cbrt(p) * std::cbrt(q * q) + std::cbrt(q) * std::cbrt(p * p));
}

// Unique root a in (0, 1-t) of  q(1-a)^2(1-a-t) = p a^2 (a+t).
// At t=0 this is a0(p) = q^{1/3} / (p^{1/3} + q^{1/3}).
inline double a0_root(double t, double p) {
    detail::require_open_p(p, "a0_root");
    if (!(t >= 0.0) || !(t < 1.0))
        throw std::domain_error("a0_root: t must lie in [0, 1)");
    double q = 1.0 - p;
    auto g = [&](double a) {
        return q * (1.0 - a) * (1.0 - a) * (1.0 - a - t) - p * a * a * (a + t);
    };
    return find_root(g, 0.0, 1.0 - t, 1e-14);
}

// 3 G1(t,p) = ln(1/(q p^2)) - max_a { 2h(a) + h(a+t) + (a+t) ln z },  z = q/p.
// The maximizing a is the a0_root above.  For t beyond 1/2-p the exponent
// saturates at the plateau (4/3) E(p).
inline double exponent_G1(double t, double p) {
    detail::require_open_p(p, "exponent_G1");
    if (!(t >= 0.0))
        throw std::domain_error("exponent_G1: t must be non-negative");
    if (t > 0.5 - p) return (4.0 / 3.0) * exponent_E(p);
    double q = 1.0 - p;
    double z = q / p;
    double a = a0_root(t, p);
    double inner = 2.0 * detail::h(a) + detail::h(a + t) + (a + t) * std::log(z);
    return (std::log(1.0 / (q * p * p)) - inner) / 3.0;
}

// Optimizer of the receiver-side term of G2.  Algebraically
//   c0(t,p) = 2(1-t) u^2 / (2u^2 + t(1-u^2) + sqrt(4u^2 + t^2 (1-u^2)^2)),
// with u = p/q = 1/z; this form is exact at t=0 (c0 = p) and stable for
// small u.
inline double c0_of(double t, double p) {
    detail::require_open_p(p, "c0_of");
    if (!(t >= 0.0))
        throw std::domain_error("c0_of: t must be non-negative");
    double u = p / (1.0 - p);
    double u2 = u * u;
    double s = std::sqrt(4.0 * u2 + t * t * (1.0 - u2) * (1.0 - u2));
    return 2.0 * (1.0 - t) * u2 / (2.0 * u2 + t * (1.0 - u2) + s);
}

// Optimizer of the feedback-side term of G2, with w = p1/q1 = 1/z1:
//   b1(t,p1) = 2 / ((2+t) - t w^2 + sqrt(4w^2 + (1-w^2)^2 t^2)).
// Exact at t=0 (b1 = q1).  Requires p1 > 0; the p1=0 case never evaluates b1
// because G2 is then +infinity by definition.
inline double b1_of(double t, double p1) {
    if (!(p1 > 0.0) || !(p1 <= 0.5))
        throw std::domain_error("b1_of: feedback crossover must lie in (0, 1/2]");
    if (!(t >= 0.0))
        throw std::domain_error("b1_of: t must be non-negative");
    double w = p1 / (1.0 - p1);
    double w2 = w * w;
    double s = std::sqrt(4.0 * w2 + (1.0 - w2) * (1.0 - w2) * t * t);
    return 2.0 / ((2.0 + t) - t * w2 + s);
}

// 3 G2(t,p,p1) = (2c0+t) ln z - h(c0+t) - h(c0)
//              + kappa ln z1 - (1+t) h(b1) - (1-t) h(b2') - 2 ln(q q1),
// where b2' = ((1+t) b1 - t)/(1-t) and kappa = 2+t-2(1+t)b1 evaluated through
// the cancellation-free closed form below (exact value 2 p1 at t=0).
// Conventions: G2(0,p,p1) = 0; G2(t,p,0) = +infinity for t > 0.
inline double exponent_G2(double t, double p, double p1) {
    detail::require_open_p(p, "exponent_G2");
    if (!(p1 >= 0.0) || !(p1 <= 0.5))
        throw std::domain_error("exponent_G2: feedback crossover must lie in [0, 1/2]");
    if (!(t >= 0.0) || !(t < 1.0))
        throw std::domain_error("exponent_G2: t must lie in [0, 1)");
    if (t == 0.0) return 0.0;
    if (p1 == 0.0) return std::numeric_limits<double>::infinity();
    double q = 1.0 - p, q1 = 1.0 - p1;
    double z = q / p, z1 = q1 / p1;
    double w = p1 / q1;
    double w2 = w * w;
    double c = c0_of(t, p);
    double b = b1_of(t, p1);
    double kappa = (4.0 * w2 + (1.0 - w2) * t * t) /
                   (2.0 * w2 + std::sqrt(4.0 * w2 + (1.0 - w2) * (1.0 - w2) * t * t));
    double b2 = ((1.0 + t) * b - t) / (1.0 - t);
    double val = (2.0 * c + t) * std::log(z) - detail::h(c + t) - detail::h(c) +
                 kappa * std::log(z1) - (1.0 + t) * detail::h(b) -
                 (1.0 - t) * detail::h(b2) - 2.0 * std::log(q * q1);
    return val / 3.0;
}

// Feedback-noise threshold: unique root p0 of 3 G2(1/2-p, p, p0) = ln(1/(4pq)).
// G2 is decreasing in p1, so the root is bracketed in log(p1) space.
inline double threshold_p0(double p) {
    detail::require_open_p(p, "threshold_p0");
    double t = 0.5 - p;
    double target = std::log(1.0 / (4.0 * p * (1.0 - p)));
    auto resid = [&](double u) { return 3.0 * exponent_G2(t, p, std::exp(u)) - target; };
    double lo = std::log(1e-18), hi = std::log(0.5);
    if (!(resid(lo) > 0.0) || !(resid(hi) < 0.0))
        throw NumericalError("threshold_p0: bracket failed");
    double u = find_root(resid, lo, hi, 1e-13);
    return std::exp(u);
}

// Best one-switch exponent: maximize 6 m E / (3m + 4E) with m = min{G1,G2}
// over t in [0, 1/2-p].  gammaStar = 8E / (3m + 4E).
//
// With noiseless feedback the pair-mismatch event cannot occur; the exponent
// becomes the closed form 6EF/(4E+3F) (the t->0+ limit), reported with
// tStar = 0, G1AtTStar = F and G2AtTStar = +infinity.
inline ExponentReport exponent_F1(double p, double p1) {
    detail::require_open_p(p, "exponent_F1");
    if (!(p1 >= 0.0) || !(p1 <= 0.5))
        throw std::domain_error("exponent_F1: feedback crossover must lie in [0, 1/2]");
    ExponentReport r;
    r.E = exponent_E(p);
    r.E2 = exponent_E2(p);
    r.F = exponent_F(p);
    r.p0 = threshold_p0(p);
    if (p1 == 0.0) {
        r.F1 = 6.0 * r.E * r.F / (4.0 * r.E + 3.0 * r.F);
        r.tStar = 0.0;
        r.gammaStar = 8.0 * r.E / (3.0 * r.F + 4.0 * r.E);
        r.G1AtTStar = r.F;
        r.G2AtTStar = std::numeric_limits<double>::infinity();
        return r;
    }
    double T = 0.5 - p;
    auto minG = [&](double t) {
        return std::min(exponent_G1(t, p), exponent_G2(t, p, p1));
    };
    r.tStar = grid_then_golden_max(minG, 0.0, T, 64, 1e-13);
    double m = minG(r.tStar);
    r.F1 = 6.0 * m * r.E / (3.0 * m + 4.0 * r.E);
    r.gammaStar = 8.0 * r.E / (3.0 * m + 4.0 * r.E);
    r.G1AtTStar = exponent_G1(r.tStar, p);
    r.G2AtTStar = exponent_G2(r.tStar, p, p1);
    return r;
}

// Active-feedback three-phase exponent with the matching phase fractions:
//   value  = E / (1/2 + 2E/(3F) + E/E(p1))
//   gamma  = 8E / (3F + 4E + 6 F E / E(p1)),  gamma1 = 3 gamma F / (4 E(p1)).
// gamma + gamma1 < 1 holds for every valid (p, p1) since E/F < 3/4.
inline ActiveExponent exponent_active(double p, double p1) {
    detail::require_open_p(p, "exponent_active");
    if (!(p1 > 0.0) || !(p1 < 0.5))
        throw std::domain_error("exponent_active: feedback crossover must lie in (0, 1/2)");
    double E = exponent_E(p);
    double F = exponent_F(p);
    double E1 = exponent_E(p1);
    ActiveExponent a;
    a.value = E / (0.5 + 2.0 * E / (3.0 * F) + E / E1);
    a.gamma = 8.0 * E / (3.0 * F + 4.0 * E + 6.0 * F * E / E1);
    a.gamma1 = 3.0 * a.gamma * F / (4.0 * E1);
    return a;
}

} // namespace bscfb
