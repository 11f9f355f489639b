#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "dmcss/experiment.hpp"

// Command-line front end. Exit codes: 0 success, 1 configuration error,
// 2 runtime error.

namespace {

struct CommonArgs {
    std::string config_path;
    std::string out_path;
    std::string format = "csv";
    std::optional<std::uint64_t> seed;
    int threads = 0;
};

void add_common(CLI::App* sub, CommonArgs& args, bool with_format) {
    sub->add_option("--config", args.config_path, "experiment config file")->required();
    sub->add_option("--out", args.out_path, "output file path")->required();
    if (with_format) {
        sub->add_option("--format", args.format, "output format: csv or json")
            ->check(CLI::IsMember({"csv", "json"}));
    }
    sub->add_option("--seed", args.seed, "override the config's master seed");
    sub->add_option("--threads", args.threads,
                    "worker threads (0 = auto); never affects the results")
        ->check(CLI::NonNegativeNumber);
}

dmcss::OutputFormat to_format(const std::string& name) {
    return name == "json" ? dmcss::OutputFormat::Json : dmcss::OutputFormat::Csv;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"DM-CSS modem and Monte Carlo BER experiment runner"};
    app.require_subcommand(1);

    CommonArgs ber_args;
    CLI::App* ber = app.add_subcommand("ber", "run BER sweeps and emit one row per point");
    add_common(ber, ber_args, true);

    CommonArgs snr_args;
    CLI::App* snr = app.add_subcommand(
        "required-snr", "find the Eb/N0 that reaches the target BER per scheme/lambda");
    add_common(snr, snr_args, true);

    CommonArgs vec_args;
    CLI::App* vec = app.add_subcommand("vectors", "export golden IQ vectors as JSON");
    add_common(vec, vec_args, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (ber->parsed()) {
            dmcss::ExperimentConfig config =
                dmcss::load_experiment_config(ber_args.config_path, true);
            if (ber_args.seed) config.master_seed = *ber_args.seed;
            dmcss::cmd_ber(config, ber_args.out_path, to_format(ber_args.format),
                           ber_args.threads);
        } else if (snr->parsed()) {
            dmcss::ExperimentConfig config =
                dmcss::load_experiment_config(snr_args.config_path, true);
            if (snr_args.seed) config.master_seed = *snr_args.seed;
            dmcss::cmd_required_snr(config, snr_args.out_path, to_format(snr_args.format),
                                    snr_args.threads);
        } else if (vec->parsed()) {
            dmcss::ExperimentConfig config =
                dmcss::load_experiment_config(vec_args.config_path, false);
            if (vec_args.seed) config.master_seed = *vec_args.seed;
            dmcss::cmd_vectors(config, vec_args.out_path);
        }
    } catch (const dmcss::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
