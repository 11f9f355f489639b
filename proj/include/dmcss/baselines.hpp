#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dmcss/types.hpp"

// Comparison schemes: LoRa, SSK-ICS-LoRa, GCSS, DCRK-CSS with non-coherent
// detectors, plus the ePSK-LoRa modulator (its detection is coherent-only
// and out of scope). Each scheme documents its packed-word bit convention,
// most significant bit first, used for enumeration and bit-error counting.

namespace dmcss {

enum class SchemeId { Lora, DmCss, EpskLora, SskIcsLora, Gcss, DcrkCss };

std::string scheme_name(SchemeId id);
SchemeId scheme_from_name(const std::string& name);

// Fixed per-scheme configuration. Defaults match the evaluated variants:
// GCSS with two groups, DCRK with eight chirp rates, ePSK-LoRa(2,4).
struct SchemeParams {
    int group_count = 2;     // GCSS G; must divide N
    int rate_count = 8;      // DCRK M_c; power of two
    int subblock_count = 2;  // ePSK N_b; must divide N
    int phase_count = 4;     // ePSK M_phi; power of two
};

// ---- LoRa ------------------------------------------------------------
// Word layout: bin (sf bits). s(n) = exp(2i*pi*n*(bin+n)/N), unit energy.
IqBuffer modulate_lora(int bin, SpreadingFactor sf);
int detect_lora(const IqBuffer& r, SpreadingFactor sf);

// ---- SSK-ICS-LoRa ----------------------------------------------------
// Up/down chirped tone, optionally passed through the fixed row-column
// block interleaver. Word layout: [interleaved, slope(0=up), bin(sf bits)].
enum class SskVariant { Up, Down, InterleavedUp, InterleavedDown };

struct SskIcsSymbol {
    SskVariant variant;
    int bin;
    friend bool operator==(const SskIcsSymbol&, const SskIcsSymbol&) = default;
};

// Row-column block interleaver: write row-wise into a 2^ceil(sf/2) x
// 2^floor(sf/2) matrix, read column-wise. out[m] = in[perm[m]].
const std::vector<int>& interleave_permutation(SpreadingFactor sf);
IqBuffer interleave(const IqBuffer& buf, SpreadingFactor sf);

IqBuffer modulate_ssk_ics(const SskIcsSymbol& symbol, SpreadingFactor sf);
// Exact non-coherent ML over all 4N candidates, evaluated as four
// dechirp+DFT branches (enumeration order: variant-major, bin ascending).
SskIcsSymbol detect_ssk_ics(const IqBuffer& r, SpreadingFactor sf);

SskIcsSymbol ssk_symbol_from_word(std::uint64_t word, SpreadingFactor sf);
std::uint64_t ssk_word_from_symbol(const SskIcsSymbol& symbol, SpreadingFactor sf);

// ---- GCSS ------------------------------------------------------------
// Sum of G up-chirped tones, one per disjoint bin group; bins[i] must lie
// in [i*N/G, (i+1)*N/G - 1]. Word layout: G fields of log2(N/G) bits, the
// in-group offsets, group 0 first.
struct GcssSymbol {
    std::vector<int> bins;
    friend bool operator==(const GcssSymbol&, const GcssSymbol&) = default;
};

IqBuffer modulate_gcss(const GcssSymbol& symbol, SpreadingFactor sf, const SchemeParams& params = {});
// Per-group magnitude argmax of the dechirped spectrum; equals joint ML
// because the groups occupy disjoint bin ranges.
GcssSymbol detect_gcss(const IqBuffer& r, SpreadingFactor sf, const SchemeParams& params = {});

GcssSymbol gcss_symbol_from_word(std::uint64_t word, SpreadingFactor sf, const SchemeParams& params = {});
std::uint64_t gcss_word_from_symbol(const GcssSymbol& symbol, SpreadingFactor sf, const SchemeParams& params = {});

// ---- DCRK-CSS --------------------------------------------------------
// Chirp-rate keying: s(n) = exp(i*pi*n*(2*bin + rate*n)/N) with rate
// multipliers 1..M_c (distinct residues, so noiseless detection is exact;
// rate 2 is the plain LoRa up-chirp). Word layout: [rate_index(log2 M_c),
// bin(sf bits)].
struct DcrkSymbol {
    int bin;
    int rate_index;
    friend bool operator==(const DcrkSymbol&, const DcrkSymbol&) = default;
};

IqBuffer modulate_dcrk(const DcrkSymbol& symbol, SpreadingFactor sf, const SchemeParams& params = {});
// Dechirp per candidate rate, global (rate, bin) magnitude argmax
// (enumeration order: rate-major, bin ascending).
DcrkSymbol detect_dcrk(const IqBuffer& r, SpreadingFactor sf, const SchemeParams& params = {});

DcrkSymbol dcrk_symbol_from_word(std::uint64_t word, SpreadingFactor sf, const SchemeParams& params = {});
std::uint64_t dcrk_word_from_symbol(const DcrkSymbol& symbol, SpreadingFactor sf, const SchemeParams& params = {});

// ---- ePSK-LoRa (modulator only) ---------------------------------------
// N_b up-chirped sub-block tones with an M_phi-ary phase on each:
// s(n) = sum_l exp(2i*pi*(bin*n/N + l*n/N_b + p_l/M_phi + n^2/N)), l = 1..N_b.
// bin in [0, N/N_b - 1]. Word layout: [bin(log2(N/N_b)), p_1, .., p_Nb].
struct EpskSymbol {
    int bin;
    std::vector<int> phases;
    friend bool operator==(const EpskSymbol&, const EpskSymbol&) = default;
};

IqBuffer modulate_epsk(const EpskSymbol& symbol, SpreadingFactor sf, const SchemeParams& params = {});

EpskSymbol epsk_symbol_from_word(std::uint64_t word, SpreadingFactor sf, const SchemeParams& params = {});
std::uint64_t epsk_word_from_symbol(const EpskSymbol& symbol, SpreadingFactor sf, const SchemeParams& params = {});

// ---- shared ------------------------------------------------------------
// Bits per symbol: LoRa sf, DM-CSS 2sf+1, ePSK(2,4) sf+3, SSK-ICS sf+2,
// GCSS G*log2(N/G), DCRK sf+log2(M_c).
int scheme_bits_per_symbol(SchemeId id, SpreadingFactor sf, const SchemeParams& params = {});

// Mean transmit symbol energy (1/N)*sum|s|^2; 2 for the dual-tone schemes
// (DM-CSS, GCSS G=2, ePSK(2,4)), 1 for the single-chirp ones.
double scheme_symbol_energy(SchemeId id, const SchemeParams& params = {});

bool scheme_has_detector(SchemeId id);

}  // namespace dmcss
