#pragma once

#include <span>

#include "dmcss/types.hpp"

// Non-coherent DM-CSS detection plus a generic maximum-correlation detector
// used as a cross-scheme oracle in the test suites.

namespace dmcss {

struct DetectionResult {
    DmCssSymbol symbol;
    double up_peak;    // max_k |DFT(r * c_d)(k)|, the up-chirp hypothesis
    double down_peak;  // max_k |DFT(r * c_u)(k)|, the down-chirp hypothesis
};

// Multiplies r by the conjugate chirp of the slope being removed, so the
// embedded tones become pure DFT bins.
IqBuffer dechirp(const IqBuffer& r, ChirpSlope removed, SpreadingFactor sf);

// Full non-coherent decision chain:
//   1. slope from the larger branch peak (tie decides up),
//   2. even/odd bins from per-parity magnitude argmax (ties: lowest index),
//   3. phase signs from the real part of the selected bins (>= 0 -> +1).
// Always returns a decision; noise shows up as bit errors, not failures.
// The slope decision is exact on noiseless input for N >= 8; at N = 4 the
// two slopes generate the same waveform set and cannot be told apart.
DetectionResult detect_dm_css(const IqBuffer& r, SpreadingFactor sf);

// Index of the candidate maximizing |<r, candidate>|; ties break to the
// lowest index. Exact non-coherent ML over an explicit waveform set.
std::size_t correlation_detect(const IqBuffer& r, std::span<const IqBuffer> candidates);

}  // namespace dmcss
