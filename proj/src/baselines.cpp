#include "dmcss/baselines.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <stdexcept>

#include "dmcss/css_core.hpp"
#include "dmcss/spectral.hpp"

namespace dmcss {

namespace {

int exact_log2(int v, const char* what) {
    if (v < 1 || (v & (v - 1)) != 0) {
        throw std::invalid_argument(std::string(what) + " must be a power of two");
    }
    int l = 0;
    while ((1 << l) < v) ++l;
    return l;
}

void check_bin(int bin, int limit, const char* what) {
    if (bin < 0 || bin >= limit) {
        throw std::invalid_argument(std::string(what) + " out of range [0, " +
                                    std::to_string(limit - 1) + "]: " + std::to_string(bin));
    }
}

// Chirped tone exp(2i*pi*n*(bin +- n)/N) through the exact root table.
IqBuffer chirped_tone(int bin, SpreadingFactor sf, ChirpSlope slope) {
    const int n = sf.num_bins();
    const IqBuffer& w = unit_roots(n);
    IqBuffer s(n);
    for (int i = 0; i < n; ++i) {
        const std::int64_t quad = slope == ChirpSlope::Up ? static_cast<std::int64_t>(i) * i
                                                          : -static_cast<std::int64_t>(i) * i;
        const std::int64_t idx = ((static_cast<std::int64_t>(bin) * i + quad) % n + n) % n;
        s[i] = w[idx];
    }
    return s;
}

struct PeakSearch {
    int bin = 0;
    double norm = -1.0;
};

PeakSearch spectrum_peak(const Spectrum& bins, int first, int last) {
    PeakSearch p;
    for (int k = first; k <= last; ++k) {
        const double v = std::norm(bins[k]);
        if (v > p.norm) {
            p.norm = v;
            p.bin = k;
        }
    }
    return p;
}

}  // namespace

std::string scheme_name(SchemeId id) {
    switch (id) {
        case SchemeId::Lora: return "lora";
        case SchemeId::DmCss: return "dmcss";
        case SchemeId::EpskLora: return "epsk-lora";
        case SchemeId::SskIcsLora: return "ssk-ics-lora";
        case SchemeId::Gcss: return "gcss";
        case SchemeId::DcrkCss: return "dcrk-css";
    }
    throw std::invalid_argument("unknown scheme id");
}

SchemeId scheme_from_name(const std::string& name) {
    if (name == "lora") return SchemeId::Lora;
    if (name == "dmcss" || name == "dm-css") return SchemeId::DmCss;
    if (name == "epsk-lora" || name == "epsk") return SchemeId::EpskLora;
    if (name == "ssk-ics-lora" || name == "ssk-ics") return SchemeId::SskIcsLora;
    if (name == "gcss") return SchemeId::Gcss;
    if (name == "dcrk-css" || name == "dcrk") return SchemeId::DcrkCss;
    throw std::invalid_argument("unknown scheme name: " + name);
}

// ---- LoRa ------------------------------------------------------------

IqBuffer modulate_lora(int bin, SpreadingFactor sf) {
    check_bin(bin, sf.num_bins(), "LoRa bin");
    return chirped_tone(bin, sf, ChirpSlope::Up);
}

int detect_lora(const IqBuffer& r, SpreadingFactor sf) {
    if (r.size() != sf.num_bins()) {
        throw std::invalid_argument("received buffer length does not match spreading factor");
    }
    Spectrum bins = r * chirp(sf, ChirpSlope::Down);
    fft_plan(sf.num_bins()).forward_inplace(bins);
    return spectrum_peak(bins, 0, sf.num_bins() - 1).bin;
}

// ---- SSK-ICS-LoRa ----------------------------------------------------

const std::vector<int>& interleave_permutation(SpreadingFactor sf) {
    static std::array<std::atomic<const std::vector<int>*>, SpreadingFactor::kMax + 1> slots{};
    std::atomic<const std::vector<int>*>& slot = slots[static_cast<std::size_t>(sf.value())];
    const std::vector<int>* existing = slot.load(std::memory_order_acquire);
    if (existing != nullptr) return *existing;

    const int lam = sf.value();
    const int rows = 1 << ((lam + 1) / 2);
    const int cols = 1 << (lam / 2);
    auto* perm = new std::vector<int>(static_cast<std::size_t>(sf.num_bins()));
    for (int c = 0; c < cols; ++c) {
        for (int r = 0; r < rows; ++r) {
            (*perm)[static_cast<std::size_t>(c * rows + r)] = r * cols + c;
        }
    }
    const std::vector<int>* expected = nullptr;
    if (slot.compare_exchange_strong(expected, perm, std::memory_order_release,
                                     std::memory_order_acquire)) {
        return *perm;
    }
    delete perm;
    return *expected;
}

IqBuffer interleave(const IqBuffer& buf, SpreadingFactor sf) {
    if (buf.size() != sf.num_bins()) {
        throw std::invalid_argument("interleave: buffer length does not match spreading factor");
    }
    const std::vector<int>& perm = interleave_permutation(sf);
    IqBuffer out(buf.size());
    for (Eigen::Index m = 0; m < buf.size(); ++m) {
        out[m] = buf[perm[static_cast<std::size_t>(m)]];
    }
    return out;
}

IqBuffer modulate_ssk_ics(const SskIcsSymbol& symbol, SpreadingFactor sf) {
    check_bin(symbol.bin, sf.num_bins(), "SSK-ICS bin");
    const bool down = symbol.variant == SskVariant::Down || symbol.variant == SskVariant::InterleavedDown;
    IqBuffer base = chirped_tone(symbol.bin, sf, down ? ChirpSlope::Down : ChirpSlope::Up);
    const bool interleaved =
        symbol.variant == SskVariant::InterleavedUp || symbol.variant == SskVariant::InterleavedDown;
    return interleaved ? interleave(base, sf) : base;
}

SskIcsSymbol detect_ssk_ics(const IqBuffer& r, SpreadingFactor sf) {
    const int n = sf.num_bins();
    if (r.size() != n) {
        throw std::invalid_argument("received buffer length does not match spreading factor");
    }
    const FftPlan& plan = fft_plan(n);
    const std::vector<int>& perm = interleave_permutation(sf);

    // <r, P[s]> = <deinterleave(r), s>, so the interleaved branches reuse the
    // plain dechirp+DFT correlator on a reordered copy of r.
    IqBuffer deint(n);
    for (int m = 0; m < n; ++m) {
        deint[perm[static_cast<std::size_t>(m)]] = r[m];
    }

    SskIcsSymbol best{SskVariant::Up, 0};
    double best_norm = -1.0;
    const std::array<SskVariant, 4> order = {SskVariant::Up, SskVariant::Down,
                                             SskVariant::InterleavedUp, SskVariant::InterleavedDown};
    for (SskVariant v : order) {
        const bool interleaved = v == SskVariant::InterleavedUp || v == SskVariant::InterleavedDown;
        const bool down = v == SskVariant::Down || v == SskVariant::InterleavedDown;
        Spectrum bins = (interleaved ? deint : r) * chirp(sf, down ? ChirpSlope::Up : ChirpSlope::Down);
        plan.forward_inplace(bins);
        const PeakSearch p = spectrum_peak(bins, 0, n - 1);
        if (p.norm > best_norm) {
            best_norm = p.norm;
            best = {v, p.bin};
        }
    }
    return best;
}

SskIcsSymbol ssk_symbol_from_word(std::uint64_t word, SpreadingFactor sf) {
    const int lam = sf.value();
    const std::uint32_t bin = word & ((1u << lam) - 1);
    const std::uint32_t slope_bit = (word >> lam) & 1u;
    const std::uint32_t il_bit = (word >> (lam + 1)) & 1u;
    return {static_cast<SskVariant>((il_bit << 1) | slope_bit), static_cast<int>(bin)};
}

std::uint64_t ssk_word_from_symbol(const SskIcsSymbol& symbol, SpreadingFactor sf) {
    check_bin(symbol.bin, sf.num_bins(), "SSK-ICS bin");
    return (static_cast<std::uint64_t>(symbol.variant) << sf.value()) |
           static_cast<std::uint64_t>(symbol.bin);
}

// ---- GCSS ------------------------------------------------------------

namespace {

int gcss_group_size(SpreadingFactor sf, const SchemeParams& params) {
    if (params.group_count < 1 || sf.num_bins() % params.group_count != 0) {
        throw std::invalid_argument("GCSS group count must divide N");
    }
    return sf.num_bins() / params.group_count;
}

}  // namespace

IqBuffer modulate_gcss(const GcssSymbol& symbol, SpreadingFactor sf, const SchemeParams& params) {
    const int group = gcss_group_size(sf, params);
    if (static_cast<int>(symbol.bins.size()) != params.group_count) {
        throw std::invalid_argument("GCSS symbol must hold one bin per group");
    }
    const int n = sf.num_bins();
    const IqBuffer& w = unit_roots(n);
    IqBuffer s = IqBuffer::Zero(n);
    for (int g = 0; g < params.group_count; ++g) {
        const int bin = symbol.bins[static_cast<std::size_t>(g)];
        if (bin < g * group || bin >= (g + 1) * group) {
            throw std::invalid_argument("GCSS bin " + std::to_string(bin) +
                                        " outside group " + std::to_string(g));
        }
        for (int i = 0; i < n; ++i) {
            const std::int64_t idx = (static_cast<std::int64_t>(bin) * i +
                                      static_cast<std::int64_t>(i) * i) % n;
            s[i] += w[idx];
        }
    }
    return s;
}

GcssSymbol detect_gcss(const IqBuffer& r, SpreadingFactor sf, const SchemeParams& params) {
    const int group = gcss_group_size(sf, params);
    if (r.size() != sf.num_bins()) {
        throw std::invalid_argument("received buffer length does not match spreading factor");
    }
    Spectrum bins = r * chirp(sf, ChirpSlope::Down);
    fft_plan(sf.num_bins()).forward_inplace(bins);
    GcssSymbol out;
    out.bins.resize(static_cast<std::size_t>(params.group_count));
    for (int g = 0; g < params.group_count; ++g) {
        out.bins[static_cast<std::size_t>(g)] = spectrum_peak(bins, g * group, (g + 1) * group - 1).bin;
    }
    return out;
}

GcssSymbol gcss_symbol_from_word(std::uint64_t word, SpreadingFactor sf, const SchemeParams& params) {
    const int group = gcss_group_size(sf, params);
    const int field = exact_log2(group, "GCSS group size");
    GcssSymbol out;
    out.bins.resize(static_cast<std::size_t>(params.group_count));
    for (int g = params.group_count - 1; g >= 0; --g) {
        out.bins[static_cast<std::size_t>(g)] = g * group + static_cast<int>(word & ((1u << field) - 1));
        word >>= field;
    }
    return out;
}

std::uint64_t gcss_word_from_symbol(const GcssSymbol& symbol, SpreadingFactor sf,
                                    const SchemeParams& params) {
    const int group = gcss_group_size(sf, params);
    const int field = exact_log2(group, "GCSS group size");
    if (static_cast<int>(symbol.bins.size()) != params.group_count) {
        throw std::invalid_argument("GCSS symbol must hold one bin per group");
    }
    std::uint64_t word = 0;
    for (int g = 0; g < params.group_count; ++g) {
        const int offset = symbol.bins[static_cast<std::size_t>(g)] - g * group;
        check_bin(offset, group, "GCSS in-group offset");
        word = (word << field) | static_cast<std::uint64_t>(offset);
    }
    return word;
}

// ---- DCRK-CSS --------------------------------------------------------

namespace {

// exp(i*pi*rate*n^2/N) realized on the 2N-th root table.
IqBuffer dcrk_rate_chirp(int rate, SpreadingFactor sf) {
    const int n = sf.num_bins();
    const IqBuffer& w2 = unit_roots(2 * n);
    IqBuffer c(n);
    for (int i = 0; i < n; ++i) {
        const std::int64_t idx = static_cast<std::int64_t>(rate) * i % (2 * n) * i % (2 * n);
        c[i] = w2[idx];
    }
    return c;
}

}  // namespace

IqBuffer modulate_dcrk(const DcrkSymbol& symbol, SpreadingFactor sf, const SchemeParams& params) {
    const int n = sf.num_bins();
    check_bin(symbol.bin, n, "DCRK bin");
    check_bin(symbol.rate_index, params.rate_count, "DCRK rate index");
    const IqBuffer& w2 = unit_roots(2 * n);
    const int rate = symbol.rate_index + 1;
    IqBuffer s(n);
    for (int i = 0; i < n; ++i) {
        // phase 2*pi * n*(2k + rate*n) / (2N), reduced mod 2N exactly
        const std::int64_t idx =
            (static_cast<std::int64_t>(i) * (2 * symbol.bin) % (2 * n) +
             static_cast<std::int64_t>(rate) * i % (2 * n) * i % (2 * n)) % (2 * n);
        s[i] = w2[idx];
    }
    return s;
}

DcrkSymbol detect_dcrk(const IqBuffer& r, SpreadingFactor sf, const SchemeParams& params) {
    const int n = sf.num_bins();
    if (r.size() != n) {
        throw std::invalid_argument("received buffer length does not match spreading factor");
    }
    const FftPlan& plan = fft_plan(n);
    DcrkSymbol best{0, 0};
    double best_norm = -1.0;
    for (int m = 0; m < params.rate_count; ++m) {
        Spectrum bins = r * dcrk_rate_chirp(m + 1, sf).conjugate();
        plan.forward_inplace(bins);
        const PeakSearch p = spectrum_peak(bins, 0, n - 1);
        if (p.norm > best_norm) {
            best_norm = p.norm;
            best = {p.bin, m};
        }
    }
    return best;
}

DcrkSymbol dcrk_symbol_from_word(std::uint64_t word, SpreadingFactor sf, const SchemeParams& params) {
    const int lam = sf.value();
    exact_log2(params.rate_count, "DCRK rate count");
    return {static_cast<int>(word & ((1u << lam) - 1)), static_cast<int>(word >> lam)};
}

std::uint64_t dcrk_word_from_symbol(const DcrkSymbol& symbol, SpreadingFactor sf,
                                    const SchemeParams& params) {
    check_bin(symbol.bin, sf.num_bins(), "DCRK bin");
    check_bin(symbol.rate_index, params.rate_count, "DCRK rate index");
    return (static_cast<std::uint64_t>(symbol.rate_index) << sf.value()) |
           static_cast<std::uint64_t>(symbol.bin);
}

// ---- ePSK-LoRa ---------------------------------------------------------

IqBuffer modulate_epsk(const EpskSymbol& symbol, SpreadingFactor sf, const SchemeParams& params) {
    const int n = sf.num_bins();
    if (params.subblock_count < 1 || n % params.subblock_count != 0) {
        throw std::invalid_argument("ePSK sub-block count must divide N");
    }
    exact_log2(params.phase_count, "ePSK phase count");
    check_bin(symbol.bin, n / params.subblock_count, "ePSK bin");
    if (static_cast<int>(symbol.phases.size()) != params.subblock_count) {
        throw std::invalid_argument("ePSK symbol needs one phase per sub-block");
    }
    const IqBuffer& w = unit_roots(n);
    const IqBuffer& wp = unit_roots(params.phase_count);
    IqBuffer s = IqBuffer::Zero(n);
    for (int l = 1; l <= params.subblock_count; ++l) {
        const int phase = symbol.phases[static_cast<std::size_t>(l - 1)];
        check_bin(phase, params.phase_count, "ePSK phase index");
        const Complex rot = wp[phase];
        const int tone = symbol.bin + l * (n / params.subblock_count);  // l*n/N_b cycles per symbol
        for (int i = 0; i < n; ++i) {
            const std::int64_t idx = (static_cast<std::int64_t>(tone) * i +
                                      static_cast<std::int64_t>(i) * i) % n;
            s[i] += rot * w[idx];
        }
    }
    return s;
}

EpskSymbol epsk_symbol_from_word(std::uint64_t word, SpreadingFactor sf, const SchemeParams& params) {
    const int phase_bits = exact_log2(params.phase_count, "ePSK phase count");
    EpskSymbol out;
    out.phases.resize(static_cast<std::size_t>(params.subblock_count));
    for (int l = params.subblock_count - 1; l >= 0; --l) {
        out.phases[static_cast<std::size_t>(l)] = static_cast<int>(word & ((1u << phase_bits) - 1));
        word >>= phase_bits;
    }
    out.bin = static_cast<int>(word);
    check_bin(out.bin, sf.num_bins() / params.subblock_count, "ePSK bin");
    return out;
}

std::uint64_t epsk_word_from_symbol(const EpskSymbol& symbol, SpreadingFactor sf,
                                    const SchemeParams& params) {
    const int phase_bits = exact_log2(params.phase_count, "ePSK phase count");
    check_bin(symbol.bin, sf.num_bins() / params.subblock_count, "ePSK bin");
    std::uint64_t word = static_cast<std::uint64_t>(symbol.bin);
    for (int l = 0; l < params.subblock_count; ++l) {
        const int phase = symbol.phases[static_cast<std::size_t>(l)];
        check_bin(phase, params.phase_count, "ePSK phase index");
        word = (word << phase_bits) | static_cast<std::uint64_t>(phase);
    }
    return word;
}

// ---- shared ------------------------------------------------------------

int scheme_bits_per_symbol(SchemeId id, SpreadingFactor sf, const SchemeParams& params) {
    const int lam = sf.value();
    switch (id) {
        case SchemeId::Lora: return lam;
        case SchemeId::DmCss: return 2 * lam + 1;
        case SchemeId::EpskLora: {
            const int nb_bits = exact_log2(params.subblock_count, "ePSK sub-block count");
            return (lam - nb_bits) + params.subblock_count * exact_log2(params.phase_count, "ePSK phase count");
        }
        case SchemeId::SskIcsLora: return lam + 2;
        case SchemeId::Gcss: {
            const int g_bits = exact_log2(params.group_count, "GCSS group count");
            return params.group_count * (lam - g_bits);
        }
        case SchemeId::DcrkCss: return lam + exact_log2(params.rate_count, "DCRK rate count");
    }
    throw std::invalid_argument("unknown scheme id");
}

double scheme_symbol_energy(SchemeId id, const SchemeParams& params) {
    switch (id) {
        case SchemeId::Lora:
        case SchemeId::SskIcsLora:
        case SchemeId::DcrkCss: return 1.0;
        case SchemeId::DmCss: return 2.0;
        case SchemeId::Gcss: return static_cast<double>(params.group_count);
        case SchemeId::EpskLora: return static_cast<double>(params.subblock_count);
    }
    throw std::invalid_argument("unknown scheme id");
}

bool scheme_has_detector(SchemeId id) { return id != SchemeId::EpskLora; }

}  // namespace dmcss
