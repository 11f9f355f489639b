#pragma once

#include <cstdint>

#include "dmcss/types.hpp"

// Chirp and symbol synthesis. Waveforms are built from cached tables of
// roots of unity, so sample phases are exact multiples of 2*pi/N rather
// than accumulated floating-point angles.

namespace dmcss {

// Table of the m-th roots of unity, exp(+2i*pi*k/m) for k = 0..m-1.
// m must be a power of two (up to 2^17). Built once per size and shared
// read-only afterwards; safe for concurrent callers.
const IqBuffer& unit_roots(int m);

// Cached chirp per (spreading factor, slope); same sharing contract.
const IqBuffer& chirp(SpreadingFactor sf, ChirpSlope slope);

// c_u(n) = exp(+2i*pi*n^2/N) and c_d(n) = conj(c_u(n)), n = 0..N-1.
IqBuffer up_chirp(SpreadingFactor sf);
IqBuffer down_chirp(SpreadingFactor sf);

// Un-chirped dual-tone symbol: one even and one odd frequency with their
// phase signs. Rejects symbols whose bins fall outside this sf.
IqBuffer unchirped_symbol(const DmCssSymbol& symbol, SpreadingFactor sf);

// Chirped transmit waveform: unchirped_symbol multiplied elementwise by the
// up- or down-chirp selected by the symbol.
IqBuffer modulate(const DmCssSymbol& symbol, SpreadingFactor sf);

// Mean sample power (1/N) * sum |s(n)|^2. Every DM-CSS symbol has energy
// exactly 2 (two unit tones; the cross term sums to zero).
double symbol_energy(const IqBuffer& buf);

// Sum s(n) * conj(t(n)); <a,a> = N * symbol_energy(a).
Complex inner_product(const IqBuffer& a, const IqBuffer& b);

// Bit mapping of a (2*sf+1)-bit word onto a symbol, most significant bit
// first:
//   bit 0            -> slope (0 = up, 1 = down)
//   bits 1..sf-1     -> v_e, natural binary; even bin = 2*v_e
//   bits sf..2sf-2   -> v_o, natural binary; odd bin = 2*v_o + 1
//   bit 2sf-1        -> even sign (0 -> +1, 1 -> -1)
//   bit 2sf          -> odd sign  (same rule)
DmCssSymbol bits_to_symbol(const BitWord& bits, SpreadingFactor sf);
BitWord symbol_to_bits(const DmCssSymbol& symbol, SpreadingFactor sf);

// Same bijection on packed words (bit 0 of the mapping = most significant
// bit of the word). Convenient for exhaustive enumeration and the Monte
// Carlo hot path.
DmCssSymbol symbol_from_word(std::uint64_t word, SpreadingFactor sf);
std::uint64_t word_from_symbol(const DmCssSymbol& symbol, SpreadingFactor sf);

// Bits carried per DM-CSS symbol: 2*sf + 1.
int dm_css_bits_per_symbol(SpreadingFactor sf);

}  // namespace dmcss
