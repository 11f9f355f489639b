#include "dmcss/simharness.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <thread>

#include "dmcss/css_core.hpp"
#include "dmcss/detectors.hpp"

namespace dmcss {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

}  // namespace

IqBuffer modulate_word(SchemeId id, std::uint64_t word, SpreadingFactor sf,
                       const SchemeParams& params) {
    switch (id) {
        case SchemeId::Lora: return modulate_lora(static_cast<int>(word), sf);
        case SchemeId::DmCss: return modulate(symbol_from_word(word, sf), sf);
        case SchemeId::SskIcsLora: return modulate_ssk_ics(ssk_symbol_from_word(word, sf), sf);
        case SchemeId::Gcss: return modulate_gcss(gcss_symbol_from_word(word, sf, params), sf, params);
        case SchemeId::DcrkCss: return modulate_dcrk(dcrk_symbol_from_word(word, sf, params), sf, params);
        case SchemeId::EpskLora: return modulate_epsk(epsk_symbol_from_word(word, sf, params), sf, params);
    }
    throw std::invalid_argument("unknown scheme id");
}

std::uint64_t detect_word(SchemeId id, const IqBuffer& r, SpreadingFactor sf,
                          const SchemeParams& params) {
    switch (id) {
        case SchemeId::Lora: return static_cast<std::uint64_t>(detect_lora(r, sf));
        case SchemeId::DmCss: return word_from_symbol(detect_dm_css(r, sf).symbol, sf);
        case SchemeId::SskIcsLora: return ssk_word_from_symbol(detect_ssk_ics(r, sf), sf);
        case SchemeId::Gcss: return gcss_word_from_symbol(detect_gcss(r, sf, params), sf, params);
        case SchemeId::DcrkCss: return dcrk_word_from_symbol(detect_dcrk(r, sf, params), sf, params);
        case SchemeId::EpskLora: break;
    }
    throw std::invalid_argument("scheme has no non-coherent detector");
}

RandomStream trial_stream(std::uint64_t master_seed, std::uint64_t point_index,
                          std::uint64_t trial_index) {
    std::uint64_t s = splitmix64(master_seed);
    s = splitmix64(s ^ point_index);
    s = splitmix64(s ^ trial_index);
    return RandomStream(s);
}

BerPoint run_ber_point(const SweepConfig& cfg, double ebn0_db, std::size_t point_index) {
    if (!scheme_has_detector(cfg.scheme)) {
        throw std::invalid_argument(scheme_name(cfg.scheme) +
                                    " requires coherent detection and cannot run BER experiments");
    }
    if (cfg.trials_per_point < 1) {
        throw std::invalid_argument("trials_per_point must be >= 1");
    }
    const SpreadingFactor sf(cfg.spreading_factor);
    const int bits = scheme_bits_per_symbol(cfg.scheme, sf, cfg.params);
    const std::uint64_t mask = (1ull << bits) - 1;
    const double energy_total = scheme_symbol_energy(cfg.scheme, cfg.params) * sf.num_bins();
    const double sigma2 = sigma_for_ebn0(ebn0_db, energy_total, bits);

    const long trials = cfg.trials_per_point;
    int workers = cfg.threads > 0 ? cfg.threads
                                  : static_cast<int>(std::thread::hardware_concurrency());
    workers = static_cast<int>(std::clamp<long>(workers, 1L, trials));

    std::vector<long long> bit_errs(static_cast<std::size_t>(workers), 0);
    std::vector<long> sym_errs(static_cast<std::size_t>(workers), 0);

    auto run_range = [&](int w, long lo, long hi) {
        long long local_bits = 0;
        long local_syms = 0;
        for (long t = lo; t < hi; ++t) {
            RandomStream rng = trial_stream(cfg.master_seed, point_index,
                                            static_cast<std::uint64_t>(t));
            const std::uint64_t tx = rng() & mask;
            const IqBuffer sent = modulate_word(cfg.scheme, tx, sf, cfg.params);
            const IqBuffer received = apply_channel(sent, cfg.channel, sigma2, rng);
            const std::uint64_t rx = detect_word(cfg.scheme, received, sf, cfg.params);
            const std::uint64_t diff = tx ^ rx;
            local_bits += std::popcount(diff);
            local_syms += diff != 0 ? 1 : 0;
        }
        bit_errs[static_cast<std::size_t>(w)] = local_bits;
        sym_errs[static_cast<std::size_t>(w)] = local_syms;
    };

    if (workers == 1) {
        run_range(0, 0, trials);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        const long per = trials / workers;
        const long extra = trials % workers;
        long lo = 0;
        for (int w = 0; w < workers; ++w) {
            const long hi = lo + per + (w < extra ? 1 : 0);
            pool.emplace_back(run_range, w, lo, hi);
            lo = hi;
        }
        for (auto& th : pool) th.join();
    }

    BerPoint point;
    point.ebn0_db = ebn0_db;
    point.trials = trials;
    for (long long b : bit_errs) point.bit_errors += b;
    for (long s : sym_errs) point.symbol_errors += s;
    point.ber = static_cast<double>(point.bit_errors) /
                (static_cast<double>(trials) * static_cast<double>(bits));
    point.ser = static_cast<double>(point.symbol_errors) / static_cast<double>(trials);
    return point;
}

std::vector<BerPoint> run_sweep(const SweepConfig& cfg) {
    if (cfg.ebn0_grid_db.empty()) {
        throw std::invalid_argument("Eb/N0 grid must not be empty");
    }
    for (std::size_t i = 1; i < cfg.ebn0_grid_db.size(); ++i) {
        if (!(cfg.ebn0_grid_db[i] > cfg.ebn0_grid_db[i - 1])) {
            throw std::invalid_argument("Eb/N0 grid must be strictly increasing");
        }
    }
    if (!(cfg.target_ber > 0.0 && cfg.target_ber < 1.0)) {
        throw std::invalid_argument("target BER must be in (0, 1)");
    }
    std::vector<BerPoint> points;
    points.reserve(cfg.ebn0_grid_db.size());
    for (std::size_t i = 0; i < cfg.ebn0_grid_db.size(); ++i) {
        points.push_back(run_ber_point(cfg, cfg.ebn0_grid_db[i], i));
    }
    return points;
}

RequiredSnrResult required_snr_at_target(const std::vector<BerPoint>& points, double target_ber) {
    if (!(target_ber > 0.0 && target_ber < 1.0)) {
        throw std::invalid_argument("target BER must be in (0, 1)");
    }
    for (const BerPoint& p : points) {
        if (p.ber == target_ber) {
            return {p.ebn0_db, p, p, "exact grid hit"};
        }
    }
    // First adjacent pair that straddles the target. Prefer a pair whose low
    // side still has errors; a zero-error point gets a half-error floor so
    // the log interpolation stays defined.
    const BerPoint* above = nullptr;
    const BerPoint* below = nullptr;
    for (std::size_t i = 0; i + 1 < points.size(); ++i) {
        if (points[i].ber > target_ber && points[i + 1].ber < target_ber) {
            above = &points[i];
            below = &points[i + 1];
            if (points[i + 1].ber > 0.0) break;
        }
    }
    if (above == nullptr) {
        throw BracketError("target BER is not bracketed by the measured points; extend the grid");
    }
    std::string note = "log-linear interpolation";
    double low_ber = below->ber;
    if (low_ber == 0.0) {
        // bits per symbol recovered from the errored bracketing point
        const double bits = std::round(static_cast<double>(above->bit_errors) /
                                       (above->ber * static_cast<double>(above->trials)));
        low_ber = 0.5 / (static_cast<double>(below->trials) * bits);
        note = "log-linear interpolation against a half-error floor (zero-error low point)";
    }
    const double la = std::log10(above->ber);
    const double lb = std::log10(low_ber);
    const double t = (la - std::log10(target_ber)) / (la - lb);
    return {above->ebn0_db + t * (below->ebn0_db - above->ebn0_db), *above, *below, note};
}

Rational spectral_efficiency(SchemeId id, SpreadingFactor sf, const SchemeParams& params) {
    return {scheme_bits_per_symbol(id, sf, params), sf.num_bins()};
}

}  // namespace dmcss
