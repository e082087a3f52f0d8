#pragma once
// Log-domain probability utilities.
//
// The exact oracle accumulates probabilities as small as e^{-1000}, so all
// sums run in log domain.  Accumulation order is fixed (ascending index)
// everywhere, which keeps results bit-reproducible.

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace bscfb {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// log(e^a + e^b), stable for any ordering and for -infinity operands.
inline double log_add(double a, double b) {
    if (a == kNegInf) return b;
    if (b == kNegInf) return a;
    double hi = a > b ? a : b;
    double lo = a > b ? b : a;
    return hi + std::log1p(std::exp(lo - hi));
}

// Cumulative table of log k! for k = 0..nmax.
class LogFactorial {
public:
    explicit LogFactorial(int nmax) : table_(static_cast<size_t>(nmax) + 1, 0.0) {
        for (int i = 2; i <= nmax; ++i)
            table_[i] = table_[i - 1] + std::log(static_cast<double>(i));
    }

    double operator()(int n) const { return table_[static_cast<size_t>(n)]; }

    double log_binomial(int n, int k) const {
        if (k < 0 || k > n) return kNegInf;
        return table_[static_cast<size_t>(n)] - table_[static_cast<size_t>(k)] -
               table_[static_cast<size_t>(n - k)];
    }

    int max_n() const { return static_cast<int>(table_.size()) - 1; }

private:
    std::vector<double> table_;
};

// log P(Bin(n, p) = k) for all k, as a vector indexed by k.
inline std::vector<double> binomial_log_pmf(const LogFactorial& lf, int n, double p) {
    if (!(p >= 0.0 && p <= 1.0))
        throw std::domain_error("binomial_log_pmf: probability outside [0,1]");
    std::vector<double> out(static_cast<size_t>(n) + 1, kNegInf);
    if (p == 0.0) {
        out[0] = 0.0;
        return out;
    }
    if (p == 1.0) {
        out[static_cast<size_t>(n)] = 0.0;
        return out;
    }
    double lp = std::log(p), lq = std::log1p(-p);
    for (int k = 0; k <= n; ++k)
        out[static_cast<size_t>(k)] = lf.log_binomial(n, k) + k * lp + (n - k) * lq;
    return out;
}

// Suffix tails of a log-pmf: out[k] = log sum_{j >= k} e^{pmf[j]}, with one
// extra entry out[n+1] = -infinity so callers can index one past the end.
inline std::vector<double> suffix_log_tails(const std::vector<double>& logPmf) {
    std::vector<double> out(logPmf.size() + 1, kNegInf);
    for (size_t k = logPmf.size(); k-- > 0;)
        out[k] = log_add(out[k + 1], logPmf[k]);
    return out;
}

// log P(Bin(n, p) > x) for a real threshold x (strict inequality).
inline double log_binomial_tail_gt(const LogFactorial& lf, int n, double p, double x) {
    int kmin = static_cast<int>(std::floor(x)) + 1;
    if (kmin < 0) kmin = 0;
    if (kmin > n) return kNegInf;
    if (p == 0.0) return kmin == 0 ? 0.0 : kNegInf;
    double lp = std::log(p), lq = std::log1p(-p);
    double acc = kNegInf;
    for (int k = kmin; k <= n; ++k)
        acc = log_add(acc, lf.log_binomial(n, k) + k * lp + (n - k) * lq);
    return acc;
}

} // namespace bscfb
