#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "dmcss/simharness.hpp"

// Experiment front end: flat key=value configs mapping to one or more
// sweeps, and the subcommand bodies behind the CLI. Output files are built
// fully in memory and published with a write-temp-then-rename, so a failed
// run never leaves partial results.

namespace dmcss {

enum class OutputFormat { Csv, Json };

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Parsed experiment description. `schemes` x `spreading_factors` defines the
// sweep list; channel impairments and Monte Carlo settings are shared.
struct ExperimentConfig {
    std::vector<SchemeId> schemes;
    std::vector<int> spreading_factors;
    std::vector<double> ebn0_grid_db;
    long trials = 200000;
    double target_ber = 1e-3;
    std::uint64_t master_seed = 1;
    ChannelSpec channel{};
    long vector_count = -1;  // vectors command; -1 = every symbol of the scheme
    SchemeParams params{};
};

// Accepted keys: schemes, lambda, ebn0_db, trials, target_ber, seed,
// fading, rho, psi, delta_f, count. Lists are comma-separated; ebn0_db also
// accepts start:step:stop. '#' starts a comment. Unknown keys are rejected.
// With needs_detector set, schemes without a non-coherent detector
// (ePSK-LoRa) are rejected at parse time.
ExperimentConfig parse_experiment_config(const std::string& text, bool needs_detector);
ExperimentConfig load_experiment_config(const std::string& path, bool needs_detector);

// One SweepConfig per (scheme, spreading factor), in config order.
std::vector<SweepConfig> sweeps_from_config(const ExperimentConfig& config, int threads);

// BER grid runs; one row per measured point:
// scheme,lambda,rho,psi,delta_f,ebn0_db,trials,bit_errors,ber,ser,seed
void cmd_ber(const ExperimentConfig& config, const std::string& out_path, OutputFormat format,
             int threads);

// Required Eb/N0 at the target BER per (scheme, lambda):
// scheme,lambda,se_num,se_den,se,required_ebn0_db,status
// An unbracketed target flags the row and the run continues.
void cmd_required_snr(const ExperimentConfig& config, const std::string& out_path,
                      OutputFormat format, int threads);

// Golden IQ vectors as a JSON array of records (scheme, lambda, word, symbol
// fields, interleaved re/im samples at full double precision).
void cmd_vectors(const ExperimentConfig& config, const std::string& out_path);

// Shared atomic file publish.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace dmcss
