#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Core>

// Core value types shared by every module. Buffers are Eigen arrays so that
// waveform math (dechirping, impairments, energies) stays expression-level;
// all complex arithmetic is double precision, which the orthogonality and
// DFT tolerances of the test suite require at large symbol sizes.

namespace dmcss {

using Complex = std::complex<double>;

// Length-N sequence of complex baseband samples; the waveform currency of
// every operation in the library.
using IqBuffer = Eigen::ArrayXcd;

// DFT bins of an IqBuffer; bin k corresponds to discrete frequency k.
using Spectrum = Eigen::ArrayXcd;

// Ordered sequence of binary digits (values 0/1), most significant first.
using BitWord = std::vector<std::uint8_t>;

enum class ChirpSlope { Up, Down };

// Spreading factor: the number of frequency-index bits per chirp alphabet,
// with N = 2^sf samples per symbol (= DFT bins).
class SpreadingFactor {
public:
    static constexpr int kMin = 2;
    static constexpr int kMax = 16;

    explicit SpreadingFactor(int sf);

    int value() const { return sf_; }        // log2 of the symbol length
    int num_bins() const { return 1 << sf_; }  // N, samples per symbol

    friend bool operator==(SpreadingFactor a, SpreadingFactor b) { return a.sf_ == b.sf_; }

private:
    int sf_;
};

// One transmitted DM-CSS symbol: an activated even and odd frequency, a
// binary phase sign on each (+1 for phase 0, -1 for phase pi), and the
// chirp direction. Construction enforces parity, range and sign domains,
// so a held value is always internally consistent.
class DmCssSymbol {
public:
    DmCssSymbol(SpreadingFactor sf, ChirpSlope slope, int even_bin, int odd_bin,
                int even_sign, int odd_sign);

    ChirpSlope slope() const { return slope_; }
    int even_bin() const { return even_bin_; }
    int odd_bin() const { return odd_bin_; }
    int even_sign() const { return even_sign_; }
    int odd_sign() const { return odd_sign_; }

    friend bool operator==(const DmCssSymbol& a, const DmCssSymbol& b) {
        return a.slope_ == b.slope_ && a.even_bin_ == b.even_bin_ && a.odd_bin_ == b.odd_bin_ &&
               a.even_sign_ == b.even_sign_ && a.odd_sign_ == b.odd_sign_;
    }

private:
    ChirpSlope slope_;
    int even_bin_;
    int odd_bin_;
    int even_sign_;
    int odd_sign_;
};

}  // namespace dmcss
