#pragma once

#include <random>

#include "dmcss/types.hpp"

// Channel impairments applied to one transmitted symbol. All operations are
// pure given an explicit random stream, so Monte Carlo workers stay
// independent of scheduling.

namespace dmcss {

using RandomStream = std::mt19937_64;

struct ChannelSpec {
    double rho = 0.0;          // 2-tap fading power split in [0, 1]
    double psi = 0.0;          // constant phase offset, radians
    double delta_f = 0.0;      // frequency offset in bins (cycles per N samples)
    double ebn0_db = 0.0;      // SNR per information bit
    bool fading_enabled = false;
};

// Per-sample complex noise variance for a requested Eb/N0:
// sigma^2 = (E_total / bits) / 10^(ebn0_db/10), with E_total = sum |s(n)|^2.
double sigma_for_ebn0(double ebn0_db, double symbol_energy_total, int bits_per_symbol);

// Circularly-symmetric complex Gaussian noise, total variance sigma2 per
// sample (sigma2/2 per real and imaginary part).
IqBuffer apply_awgn(const IqBuffer& s, double sigma2, RandomStream& rng);

// Deterministic 2-tap impulse response sqrt(1-rho), sqrt(rho) with one
// sample of delay; symbols are isolated, so s(-1) = 0.
IqBuffer apply_fading(const IqBuffer& s, double rho);

// Whole-symbol rotation exp(i*psi).
IqBuffer apply_phase_offset(const IqBuffer& s, double psi);

// Progressive rotation exp(2i*pi*delta_f*n/N).
IqBuffer apply_freq_offset(const IqBuffer& s, double delta_f);

// The harness's fixed impairment order: fading -> phase offset -> frequency
// offset -> AWGN. Disabled stages (zero/off parameters) are skipped.
IqBuffer apply_channel(const IqBuffer& s, const ChannelSpec& spec, double sigma2,
                       RandomStream& rng);

}  // namespace dmcss
