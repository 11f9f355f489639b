#pragma once

#include "dmcss/types.hpp"

// Forward DFT used by every detector: bins[k] = sum_n buf[n]*exp(-2i*pi*k*n/N),
// unnormalized. Detector decisions compare magnitudes and real-part signs, so
// no 1/N convention is needed anywhere.

namespace dmcss {

// Radix-2 in-order transform with a precomputed twiddle table. Plans are
// immutable after construction; forward_inplace is const and reentrant.
class FftPlan {
public:
    explicit FftPlan(int n);  // n must be a power of two

    int size() const { return n_; }
    void forward_inplace(Spectrum& buf) const;

private:
    int n_;
    std::vector<int> bit_reversal_;
    IqBuffer twiddle_;  // exp(-2i*pi*k/n), k < n/2
};

// Shared plan per size; built once, read-many.
const FftPlan& fft_plan(int n);

// Fast transform (rejects non-power-of-two lengths).
Spectrum dft_fast(const IqBuffer& buf);

// Direct O(N^2) evaluation of the same sum; reference oracle for dft_fast.
Spectrum dft_reference(const IqBuffer& buf);

}  // namespace dmcss
