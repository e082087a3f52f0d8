#pragma once
// Binary symmetric channel legs.
//
// transmit() models the forward BSC; passive_feedback() models the receiver
// re-transmitting its raw outputs over the feedback BSC.  Both flip each bit
// independently using the counter-based stream at (trial, startPos + i), so
// the noise at a given position is a fixed function of (seed, streamId,
// trial, position) regardless of call order.  Phases of a protocol share one
// stream by advancing startPos.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "bscfb/rng.hpp"

namespace bscfb {

using BitVec = std::vector<std::uint8_t>; // values 0/1

namespace detail {
inline void require_crossover(double c, const char* who) {
    if (!(c >= 0.0 && c <= 0.5))
        throw std::domain_error(std::string(who) + ": crossover outside [0, 1/2]");
}
} // namespace detail

// In-place form: out receives the noisy copy of bits (resized as needed).
inline void transmit_into(BitVec& out, const BitVec& bits, double crossover,
                          const rng::TrialStream& stream, std::uint64_t startPos = 0) {
    detail::require_crossover(crossover, "transmit");
    out.resize(bits.size());
    for (size_t i = 0; i < bits.size(); ++i)
        out[i] = static_cast<std::uint8_t>(
            bits[i] ^ static_cast<std::uint8_t>(stream.bernoulli(startPos + i, crossover)));
}

inline BitVec transmit(const BitVec& bits, double crossover,
                       const rng::TrialStream& stream, std::uint64_t startPos = 0) {
    BitVec out;
    transmit_into(out, bits, crossover, stream, startPos);
    return out;
}

// The transmitter's view of one receiver output symbol, through BSC(p1).
inline std::uint8_t passive_feedback_step(std::uint8_t forwardOutputBit, double p1,
                                          const rng::TrialStream& stream,
                                          std::uint64_t position) {
    detail::require_crossover(p1, "passive_feedback_step");
    return static_cast<std::uint8_t>(
        forwardOutputBit ^ static_cast<std::uint8_t>(stream.bernoulli(position, p1)));
}

// Whole-block passive feedback: x' = y with each symbol flipped w.p. p1.
inline BitVec passive_feedback(const BitVec& forwardOutput, double p1,
                               const rng::TrialStream& stream,
                               std::uint64_t startPos = 0) {
    detail::require_crossover(p1, "passive_feedback");
    BitVec out(forwardOutput.size());
    for (size_t i = 0; i < forwardOutput.size(); ++i)
        out[i] = passive_feedback_step(forwardOutput[i], p1, stream, startPos + i);
    return out;
}

} // namespace bscfb
