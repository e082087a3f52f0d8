#pragma once
// Channel parameter bundle: forward BSC crossover p and feedback BSC
// crossover p1, with their complements.
//
// p1 == 0 is a distinguished noiseless-feedback state: callers branch on
// noiseless_feedback() instead of doing arithmetic with an infinite
// likelihood ratio z1.

#include <stdexcept>

namespace bscfb {

struct ChannelParams {
    double p;  // forward crossover, 0 < p < 1/2
    double p1; // feedback crossover, 0 <= p1 <= 1/2
    double q;  // 1 - p
    double q1; // 1 - p1

    ChannelParams(double p_, double p1_) : p(p_), p1(p1_), q(1.0 - p_), q1(1.0 - p1_) {
        if (!(p > 0.0) || !(p < 0.5))
            throw std::domain_error("forward crossover must lie in (0, 1/2)");
        if (!(p1 >= 0.0) || !(p1 <= 0.5))
            throw std::domain_error("feedback crossover must lie in [0, 1/2]");
    }

    bool noiseless_feedback() const { return p1 == 0.0; }

    // Likelihood ratios; z > 1 always, z1 >= 1 and only valid when p1 > 0.
    double z() const { return q / p; }
    double z1() const {
        if (p1 == 0.0)
            throw std::domain_error("z1 undefined for noiseless feedback");
        return q1 / p1;
    }
};

} // namespace bscfb
