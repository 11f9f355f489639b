#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "dmcss/baselines.hpp"
#include "dmcss/channels.hpp"
#include "dmcss/types.hpp"

// Reproducible Monte Carlo BER experiments over (scheme, sf, channel,
// Eb/N0) grids. Every random draw flows from a counter-derived per-trial
// stream, so results are bit-identical for a given master seed no matter
// how trials are split across workers.

namespace dmcss {

// Exact bits-per-symbol over N spectral efficiency, kept as a ratio.
struct Rational {
    long long num = 0;
    long long den = 1;
    double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }
    friend bool operator==(const Rational&, const Rational&) = default;
};

struct SweepConfig {
    SchemeId scheme = SchemeId::DmCss;
    SchemeParams params{};
    int spreading_factor = 9;
    ChannelSpec channel{};            // impairments; the grid supplies ebn0_db
    std::vector<double> ebn0_grid_db;
    long trials_per_point = 200000;
    double target_ber = 1e-3;
    std::uint64_t master_seed = 1;
    int threads = 0;                  // 0 = hardware concurrency; never changes results
};

struct BerPoint {
    double ebn0_db = 0.0;
    long trials = 0;
    long long bit_errors = 0;
    long symbol_errors = 0;
    double ber = 0.0;
    double ser = 0.0;
};

struct RequiredSnrResult {
    double ebn0_db_at_target = 0.0;
    BerPoint above;    // bracketing grid point with ber >= target
    BerPoint below;    // bracketing grid point with ber <= target
    std::string note;  // how the value was obtained
};

// Thrown when the measured curve never crosses the target BER.
class BracketError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Independent random stream for one trial, derived from
// (master seed, point index, trial index) so streams never overlap.
RandomStream trial_stream(std::uint64_t master_seed, std::uint64_t point_index,
                          std::uint64_t trial_index);

// One measured BER point: per trial draw a random bit word, modulate, pass
// through the channel chain, detect, and count bit/symbol errors.
// point_index feeds the stream derivation; run_sweep passes the grid position.
BerPoint run_ber_point(const SweepConfig& cfg, double ebn0_db, std::size_t point_index = 0);

// run_ber_point over the whole grid, in grid order.
std::vector<BerPoint> run_sweep(const SweepConfig& cfg);

// Log-linear interpolation (linear in dB, linear in log10 BER) between the
// bracketing pair around the target; exact grid hits are returned as-is.
RequiredSnrResult required_snr_at_target(const std::vector<BerPoint>& points, double target_ber);

// bits-per-symbol / N, unreduced.
Rational spectral_efficiency(SchemeId id, SpreadingFactor sf, const SchemeParams& params = {});

// Packed-word front door shared by the trial loop, the golden-vector export
// and the acceptance runs: word -> transmit waveform, received waveform ->
// decided word, using each scheme's documented bit layout.
IqBuffer modulate_word(SchemeId id, std::uint64_t word, SpreadingFactor sf,
                       const SchemeParams& params = {});
std::uint64_t detect_word(SchemeId id, const IqBuffer& r, SpreadingFactor sf,
                          const SchemeParams& params = {});

}  // namespace dmcss
