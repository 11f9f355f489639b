#include "dmcss/spectral.hpp"

#include <array>
#include <atomic>
#include <stdexcept>
#include <string>

#include "dmcss/css_core.hpp"

namespace dmcss {

namespace {

int exact_log2_pow2(int n) {
    if (n < 1 || (n & (n - 1)) != 0) {
        throw std::invalid_argument("DFT length must be a power of two, got " +
                                    std::to_string(n));
    }
    int l = 0;
    while ((1 << l) < n) ++l;
    return l;
}

}  // namespace

FftPlan::FftPlan(int n) : n_(n), bit_reversal_(static_cast<std::size_t>(n)) {
    const int stages = exact_log2_pow2(n);
    for (int i = 0; i < n; ++i) {
        int rev = 0;
        for (int s = 0; s < stages; ++s) rev |= ((i >> s) & 1) << (stages - 1 - s);
        bit_reversal_[static_cast<std::size_t>(i)] = rev;
    }
    // Forward twiddles from the exact root table: exp(-2i*pi*k/n) = conj(w_n^k).
    const IqBuffer& w = unit_roots(n);
    twiddle_.resize(n / 2 > 0 ? n / 2 : 1);
    twiddle_[0] = Complex(1.0, 0.0);
    for (int k = 1; k < n / 2; ++k) twiddle_[k] = std::conj(w[k]);
}

void FftPlan::forward_inplace(Spectrum& buf) const {
    if (buf.size() != n_) {
        throw std::invalid_argument("buffer length does not match plan size");
    }
    for (int i = 0; i < n_; ++i) {
        const int j = bit_reversal_[static_cast<std::size_t>(i)];
        if (j > i) std::swap(buf[i], buf[j]);
    }
    for (int len = 2; len <= n_; len <<= 1) {
        const int half = len / 2;
        const int stride = n_ / len;
        for (int base = 0; base < n_; base += len) {
            for (int k = 0; k < half; ++k) {
                const Complex w = twiddle_[k * stride];
                const Complex a = buf[base + k];
                const Complex b = buf[base + k + half] * w;
                buf[base + k] = a + b;
                buf[base + k + half] = a - b;
            }
        }
    }
}

const FftPlan& fft_plan(int n) {
    // Same initialize-once, read-many contract as the chirp cache.
    static std::array<std::atomic<const FftPlan*>, 2 * SpreadingFactor::kMax + 2> slots{};
    const int l = exact_log2_pow2(n);
    if (static_cast<std::size_t>(l) >= slots.size()) {
        throw std::invalid_argument("DFT length out of supported range");
    }
    std::atomic<const FftPlan*>& slot = slots[static_cast<std::size_t>(l)];
    const FftPlan* existing = slot.load(std::memory_order_acquire);
    if (existing != nullptr) return *existing;
    auto* fresh = new FftPlan(n);
    const FftPlan* expected = nullptr;
    if (slot.compare_exchange_strong(expected, fresh, std::memory_order_release,
                                     std::memory_order_acquire)) {
        return *fresh;
    }
    delete fresh;
    return *expected;
}

Spectrum dft_fast(const IqBuffer& buf) {
    Spectrum bins = buf;
    fft_plan(static_cast<int>(buf.size())).forward_inplace(bins);
    return bins;
}

Spectrum dft_reference(const IqBuffer& buf) {
    const int n = static_cast<int>(buf.size());
    exact_log2_pow2(n);
    const IqBuffer& w = unit_roots(n);
    Spectrum bins(n);
    for (int k = 0; k < n; ++k) {
        Complex acc(0.0, 0.0);
        for (int i = 0; i < n; ++i) {
            acc += buf[i] * std::conj(w[static_cast<std::int64_t>(k) * i % n]);
        }
        bins[k] = acc;
    }
    return bins;
}

}  // namespace dmcss
