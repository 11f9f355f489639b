#include "dmcss/experiment.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "dmcss/css_core.hpp"

namespace dmcss {

namespace {

using nlohmann::json;

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_list(const std::string& value) {
    std::vector<std::string> items;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) throw ConfigError("empty list element in '" + value + "'");
        items.push_back(item);
    }
    if (items.empty()) throw ConfigError("empty list value");
    return items;
}

double parse_double(const std::string& s) {
    double v = 0.0;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last) throw ConfigError("not a number: '" + s + "'");
    return v;
}

long long parse_int(const std::string& s) {
    long long v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw ConfigError("not an integer: '" + s + "'");
    }
    return v;
}

std::uint64_t parse_seed(const std::string& s) {
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw ConfigError("not a valid seed: '" + s + "'");
    }
    return v;
}

bool parse_bool(const std::string& s) {
    if (s == "on" || s == "true" || s == "1") return true;
    if (s == "off" || s == "false" || s == "0") return false;
    throw ConfigError("not a boolean (on/off/true/false): '" + s + "'");
}

// "a,b,c" or "start:step:stop" (stop must be an exact number of steps away).
std::vector<double> parse_grid(const std::string& value) {
    if (value.find(':') != std::string::npos) {
        std::vector<std::string> parts;
        std::stringstream ss(value);
        std::string p;
        while (std::getline(ss, p, ':')) parts.push_back(trim(p));
        if (parts.size() != 3) throw ConfigError("grid range must be start:step:stop");
        const double start = parse_double(parts[0]);
        const double step = parse_double(parts[1]);
        const double stop = parse_double(parts[2]);
        if (!(step > 0.0) || stop < start) throw ConfigError("grid range must increase");
        const auto count = static_cast<long>(std::llround((stop - start) / step));
        if (std::abs(start + static_cast<double>(count) * step - stop) > 1e-6) {
            throw ConfigError("grid stop is not a whole number of steps from start");
        }
        std::vector<double> grid;
        for (long i = 0; i <= count; ++i) grid.push_back(start + static_cast<double>(i) * step);
        return grid;
    }
    std::vector<double> grid;
    for (const std::string& item : split_list(value)) grid.push_back(parse_double(item));
    return grid;
}

std::string format_double(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

std::string slope_name(ChirpSlope slope) { return slope == ChirpSlope::Up ? "up" : "down"; }

std::string variant_name(SskVariant v) {
    switch (v) {
        case SskVariant::Up: return "up";
        case SskVariant::Down: return "down";
        case SskVariant::InterleavedUp: return "interleaved-up";
        case SskVariant::InterleavedDown: return "interleaved-down";
    }
    return "?";
}

}  // namespace

ExperimentConfig parse_experiment_config(const std::string& text, bool needs_detector) {
    ExperimentConfig config;
    bool saw_schemes = false;
    bool saw_lambda = false;
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        const std::string line = trim(raw);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (value.empty()) throw ConfigError("line " + std::to_string(line_no) + ": empty value");

        if (key == "schemes" || key == "scheme") {
            for (const std::string& name : split_list(value)) {
                const SchemeId id = scheme_from_name(name);
                if (needs_detector && !scheme_has_detector(id)) {
                    throw ConfigError("scheme '" + name +
                                      "' requires coherent detection and cannot run BER experiments");
                }
                config.schemes.push_back(id);
            }
            saw_schemes = true;
        } else if (key == "lambda") {
            for (const std::string& item : split_list(value)) {
                const long long lam = parse_int(item);
                SpreadingFactor probe(static_cast<int>(lam));  // range check
                config.spreading_factors.push_back(probe.value());
            }
            saw_lambda = true;
        } else if (key == "ebn0_db") {
            config.ebn0_grid_db = parse_grid(value);
            for (std::size_t i = 1; i < config.ebn0_grid_db.size(); ++i) {
                if (!(config.ebn0_grid_db[i] > config.ebn0_grid_db[i - 1])) {
                    throw ConfigError("ebn0_db grid must be strictly increasing");
                }
            }
        } else if (key == "trials") {
            config.trials = static_cast<long>(parse_int(value));
            if (config.trials < 1) throw ConfigError("trials must be >= 1");
        } else if (key == "target_ber") {
            config.target_ber = parse_double(value);
            if (!(config.target_ber > 0.0 && config.target_ber < 1.0)) {
                throw ConfigError("target_ber must be in (0, 1)");
            }
        } else if (key == "seed") {
            config.master_seed = parse_seed(value);
        } else if (key == "fading") {
            config.channel.fading_enabled = parse_bool(value);
        } else if (key == "rho") {
            config.channel.rho = parse_double(value);
            if (config.channel.rho < 0.0 || config.channel.rho > 1.0) {
                throw ConfigError("rho must be in [0, 1]");
            }
        } else if (key == "psi") {
            config.channel.psi = parse_double(value);
        } else if (key == "delta_f") {
            config.channel.delta_f = parse_double(value);
        } else if (key == "count") {
            config.vector_count = value == "all" ? -1 : static_cast<long>(parse_int(value));
            if (config.vector_count == 0 || config.vector_count < -1) {
                throw ConfigError("count must be positive or 'all'");
            }
        } else {
            throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" + key + "'");
        }
    }
    if (!saw_schemes) throw ConfigError("config is missing 'schemes'");
    if (!saw_lambda) throw ConfigError("config is missing 'lambda'");
    return config;
}

ExperimentConfig load_experiment_config(const std::string& path, bool needs_detector) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_experiment_config(buffer.str(), needs_detector);
}

std::vector<SweepConfig> sweeps_from_config(const ExperimentConfig& config, int threads) {
    if (config.ebn0_grid_db.empty()) throw ConfigError("config is missing 'ebn0_db'");
    std::vector<SweepConfig> sweeps;
    for (SchemeId scheme : config.schemes) {
        for (int lam : config.spreading_factors) {
            SweepConfig sweep;
            sweep.scheme = scheme;
            sweep.params = config.params;
            sweep.spreading_factor = lam;
            sweep.channel = config.channel;
            sweep.ebn0_grid_db = config.ebn0_grid_db;
            sweep.trials_per_point = config.trials;
            sweep.target_ber = config.target_ber;
            sweep.master_seed = config.master_seed;
            sweep.threads = threads;
            sweeps.push_back(std::move(sweep));
        }
    }
    return sweeps;
}

void write_file_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open output file: " + tmp);
        out << content;
        if (!out) throw std::runtime_error("write failed: " + tmp);
    }
    std::filesystem::rename(tmp, path);
}

void cmd_ber(const ExperimentConfig& config, const std::string& out_path, OutputFormat format,
             int threads) {
    const std::vector<SweepConfig> sweeps = sweeps_from_config(config, threads);
    std::ostringstream csv;
    json rows = json::array();
    csv << "scheme,lambda,rho,psi,delta_f,ebn0_db,trials,bit_errors,ber,ser,seed\n";
    for (const SweepConfig& sweep : sweeps) {
        const std::vector<BerPoint> points = run_sweep(sweep);
        const double rho = sweep.channel.fading_enabled ? sweep.channel.rho : 0.0;
        for (const BerPoint& p : points) {
            if (format == OutputFormat::Csv) {
                csv << scheme_name(sweep.scheme) << ',' << sweep.spreading_factor << ','
                    << format_double(rho) << ',' << format_double(sweep.channel.psi) << ','
                    << format_double(sweep.channel.delta_f) << ',' << format_double(p.ebn0_db)
                    << ',' << p.trials << ',' << p.bit_errors << ',' << format_double(p.ber)
                    << ',' << format_double(p.ser) << ',' << sweep.master_seed << '\n';
            } else {
                rows.push_back({{"scheme", scheme_name(sweep.scheme)},
                                {"lambda", sweep.spreading_factor},
                                {"rho", rho},
                                {"psi", sweep.channel.psi},
                                {"delta_f", sweep.channel.delta_f},
                                {"ebn0_db", p.ebn0_db},
                                {"trials", p.trials},
                                {"bit_errors", p.bit_errors},
                                {"ber", p.ber},
                                {"ser", p.ser},
                                {"seed", sweep.master_seed}});
            }
        }
    }
    write_file_atomic(out_path,
                      format == OutputFormat::Csv ? csv.str() : rows.dump(2) + "\n");
}

void cmd_required_snr(const ExperimentConfig& config, const std::string& out_path,
                      OutputFormat format, int threads) {
    const std::vector<SweepConfig> sweeps = sweeps_from_config(config, threads);
    std::ostringstream csv;
    json rows = json::array();
    csv << "scheme,lambda,se_num,se_den,se,required_ebn0_db,status\n";
    for (const SweepConfig& sweep : sweeps) {
        const SpreadingFactor sf(sweep.spreading_factor);
        const Rational se = spectral_efficiency(sweep.scheme, sf, sweep.params);
        const std::vector<BerPoint> points = run_sweep(sweep);
        std::string status = "ok";
        double required = 0.0;
        bool bracketed = true;
        try {
            required = required_snr_at_target(points, sweep.target_ber).ebn0_db_at_target;
        } catch (const BracketError&) {
            bracketed = false;
            status = "unbracketed";
        }
        if (format == OutputFormat::Csv) {
            csv << scheme_name(sweep.scheme) << ',' << sweep.spreading_factor << ',' << se.num
                << ',' << se.den << ',' << format_double(se.to_double()) << ','
                << (bracketed ? format_double(required) : "") << ',' << status << '\n';
        } else {
            json row = {{"scheme", scheme_name(sweep.scheme)},
                        {"lambda", sweep.spreading_factor},
                        {"se_num", se.num},
                        {"se_den", se.den},
                        {"se", se.to_double()},
                        {"status", status}};
            row["required_ebn0_db"] = bracketed ? json(required) : json(nullptr);
            rows.push_back(row);
        }
    }
    write_file_atomic(out_path,
                      format == OutputFormat::Csv ? csv.str() : rows.dump(2) + "\n");
}

namespace {

json symbol_fields(SchemeId id, std::uint64_t word, SpreadingFactor sf, const SchemeParams& params) {
    switch (id) {
        case SchemeId::Lora:
            return {{"bin", word}};
        case SchemeId::DmCss: {
            const DmCssSymbol s = symbol_from_word(word, sf);
            return {{"slope", slope_name(s.slope())},
                    {"even_bin", s.even_bin()},
                    {"odd_bin", s.odd_bin()},
                    {"even_sign", s.even_sign()},
                    {"odd_sign", s.odd_sign()}};
        }
        case SchemeId::SskIcsLora: {
            const SskIcsSymbol s = ssk_symbol_from_word(word, sf);
            return {{"variant", variant_name(s.variant)}, {"bin", s.bin}};
        }
        case SchemeId::Gcss: {
            const GcssSymbol s = gcss_symbol_from_word(word, sf, params);
            return {{"bins", s.bins}};
        }
        case SchemeId::DcrkCss: {
            const DcrkSymbol s = dcrk_symbol_from_word(word, sf, params);
            return {{"bin", s.bin}, {"rate_index", s.rate_index}};
        }
        case SchemeId::EpskLora: {
            const EpskSymbol s = epsk_symbol_from_word(word, sf, params);
            return {{"bin", s.bin}, {"phases", s.phases}};
        }
    }
    throw std::invalid_argument("unknown scheme id");
}

}  // namespace

void cmd_vectors(const ExperimentConfig& config, const std::string& out_path) {
    json records = json::array();
    for (SchemeId scheme : config.schemes) {
        for (int lam : config.spreading_factors) {
            const SpreadingFactor sf(lam);
            const int bits = scheme_bits_per_symbol(scheme, sf, config.params);
            const long long total = 1ll << bits;
            long long count = config.vector_count < 0 ? total
                                                      : std::min<long long>(config.vector_count, total);
            if (config.vector_count < 0 && total > 65536) {
                throw ConfigError("scheme " + scheme_name(scheme) + " at lambda " +
                                  std::to_string(lam) + " has " + std::to_string(total) +
                                  " symbols; set an explicit 'count'");
            }
            for (long long w = 0; w < count; ++w) {
                const auto word = static_cast<std::uint64_t>(w);
                const IqBuffer s = modulate_word(scheme, word, sf, config.params);
                std::vector<double> iq;
                iq.reserve(static_cast<std::size_t>(2 * s.size()));
                for (Eigen::Index i = 0; i < s.size(); ++i) {
                    iq.push_back(s[i].real());
                    iq.push_back(s[i].imag());
                }
                records.push_back({{"scheme", scheme_name(scheme)},
                                   {"lambda", lam},
                                   {"word", word},
                                   {"fields", symbol_fields(scheme, word, sf, config.params)},
                                   {"iq", iq}});
            }
        }
    }
    write_file_atomic(out_path, records.dump() + "\n");
}

}  // namespace dmcss
