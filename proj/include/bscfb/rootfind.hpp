#pragma once
// One-dimensional root finding and unimodal maximization.
//
// find_root: bracketed bisection refined by a safeguarded secant step.  Every
// root solved in this library is unique inside its bracket (monotone or
// strictly concave objective), so a sign-preserving bracket plus secant
// acceleration is both robust and fast.
//
// golden_max / grid_then_golden_max: derivative-free maximization of a
// unimodal function; the grid seeding narrows the golden-section interval so
// flat shoulders cannot mislead the search.

#include <cmath>
#include <utility>

#include "bscfb/errors.hpp"

namespace bscfb {

// Root of f on [lo, hi]; f(lo) and f(hi) must have opposite (or zero) signs.
// Stops when the bracket width drops below xtol.  A secant proposal is taken
// whenever it lands strictly inside the current bracket and shrinks it;
// otherwise the step falls back to bisection, so convergence is guaranteed.
template <class F>
double find_root(F&& f, double lo, double hi, double xtol = 1e-12) {
    double flo = f(lo);
    double fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo > 0.0) == (fhi > 0.0))
        throw NumericalError("find_root: no sign change over bracket");
    for (int iter = 0; iter < 400 && (hi - lo) > xtol; ++iter) {
        double mid = 0.5 * (lo + hi);
        // Secant proposal from the bracket endpoints, on alternating
        // iterations only: the interleaved bisection guarantees the bracket
        // halves at least every other step, so a secant that keeps landing
        // next to one endpoint (steep/flat brackets) cannot stall the search.
        double denom = fhi - flo;
        if (iter % 2 == 0 && denom != 0.0) {
            double sec = lo - flo * (hi - lo) / denom;
            if (sec > lo + 0.1 * xtol && sec < hi - 0.1 * xtol) mid = sec;
        }
        double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
            fhi = fm;
        }
    }
    return 0.5 * (lo + hi);
}

// Maximum of a unimodal f on [lo, hi] by golden-section search.
template <class F>
double golden_max(F&& f, double lo, double hi, double xtol = 1e-13) {
    constexpr double gr = 0.6180339887498949; // (sqrt(5)-1)/2
    double a = lo, b = hi;
    double c = b - gr * (b - a);
    double d = a + gr * (b - a);
    double fc = f(c), fd = f(d);
    for (int iter = 0; iter < 400 && (b - a) > xtol; ++iter) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - gr * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + gr * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

// Coarse grid scan (gridPoints+1 samples) followed by golden-section search on
// the bracketing subinterval of the grid argmax.
template <class F>
double grid_then_golden_max(F&& f, double lo, double hi, int gridPoints = 64,
                            double xtol = 1e-13) {
    int bestI = 0;
    double bestV = f(lo);
    for (int i = 1; i <= gridPoints; ++i) {
        double x = lo + (hi - lo) * i / gridPoints;
        double v = f(x);
        if (v > bestV) {
            bestV = v;
            bestI = i;
        }
    }
    double a = lo + (hi - lo) * (bestI > 0 ? bestI - 1 : 0) / gridPoints;
    double b = lo + (hi - lo) * (bestI < gridPoints ? bestI + 1 : gridPoints) / gridPoints;
    return golden_max(std::forward<F>(f), a, b, xtol);
}

} // namespace bscfb
