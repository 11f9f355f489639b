#include "dmcss/css_core.hpp"

#include <array>
#include <atomic>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace dmcss {

SpreadingFactor::SpreadingFactor(int sf) : sf_(sf) {
    if (sf < kMin || sf > kMax) {
        throw std::invalid_argument("spreading factor must be in [" + std::to_string(kMin) +
                                    ", " + std::to_string(kMax) + "], got " + std::to_string(sf));
    }
}

DmCssSymbol::DmCssSymbol(SpreadingFactor sf, ChirpSlope slope, int even_bin, int odd_bin,
                         int even_sign, int odd_sign)
    : slope_(slope), even_bin_(even_bin), odd_bin_(odd_bin),
      even_sign_(even_sign), odd_sign_(odd_sign) {
    const int n = sf.num_bins();
    if (even_bin < 0 || even_bin > n - 2 || (even_bin & 1) != 0) {
        throw std::invalid_argument("even bin must be even and in [0, N-2], got " +
                                    std::to_string(even_bin));
    }
    if (odd_bin < 1 || odd_bin > n - 1 || (odd_bin & 1) != 1) {
        throw std::invalid_argument("odd bin must be odd and in [1, N-1], got " +
                                    std::to_string(odd_bin));
    }
    if (even_sign * even_sign != 1 || odd_sign * odd_sign != 1) {
        throw std::invalid_argument("phase signs must be +1 or -1");
    }
}

namespace {

// Lazily published lookup tables. Readers load an atomic pointer; the first
// builder for a size wins the publish race and later duplicates are freed.
class TableCache {
public:
    const IqBuffer& get(int log2_size, const auto& build) {
        std::atomic<const IqBuffer*>& slot = slots_[log2_size];
        const IqBuffer* existing = slot.load(std::memory_order_acquire);
        if (existing != nullptr) return *existing;
        auto* fresh = new IqBuffer(build());
        const IqBuffer* expected = nullptr;
        if (slot.compare_exchange_strong(expected, fresh, std::memory_order_release,
                                         std::memory_order_acquire)) {
            return *fresh;
        }
        delete fresh;
        return *expected;
    }

private:
    std::array<std::atomic<const IqBuffer*>, 2 * SpreadingFactor::kMax + 2> slots_{};
};

int exact_log2(int m) {
    if (m < 1 || (m & (m - 1)) != 0) {
        throw std::invalid_argument("size must be a power of two, got " + std::to_string(m));
    }
    int l = 0;
    while ((1 << l) < m) ++l;
    return l;
}

IqBuffer build_roots(int m) {
    IqBuffer w(m);
    for (int k = 0; k < m; ++k) {
        const double phase = 2.0 * std::numbers::pi * static_cast<double>(k) / m;
        w[k] = Complex(std::cos(phase), std::sin(phase));
    }
    return w;
}

IqBuffer build_chirp(SpreadingFactor sf, ChirpSlope slope) {
    const int n = sf.num_bins();
    const IqBuffer& w = unit_roots(n);
    IqBuffer c(n);
    for (int i = 0; i < n; ++i) {
        // exp(+-2i*pi*n^2/N), phase index reduced mod N to keep it exact
        const auto idx = static_cast<std::int64_t>(i) * i % n;
        c[i] = slope == ChirpSlope::Up ? w[idx] : std::conj(w[idx]);
    }
    return c;
}

}  // namespace

const IqBuffer& unit_roots(int m) {
    static TableCache cache;
    const int l = exact_log2(m);
    if (l > 2 * SpreadingFactor::kMax + 1) {
        throw std::invalid_argument("root table size out of range");
    }
    return cache.get(l, [m] { return build_roots(m); });
}

const IqBuffer& chirp(SpreadingFactor sf, ChirpSlope slope) {
    static TableCache up_cache;
    static TableCache down_cache;
    TableCache& cache = slope == ChirpSlope::Up ? up_cache : down_cache;
    return cache.get(sf.value(), [&] { return build_chirp(sf, slope); });
}

IqBuffer up_chirp(SpreadingFactor sf) { return chirp(sf, ChirpSlope::Up); }

IqBuffer down_chirp(SpreadingFactor sf) { return chirp(sf, ChirpSlope::Down); }

namespace {

void check_symbol_range(const DmCssSymbol& symbol, SpreadingFactor sf) {
    const int n = sf.num_bins();
    if (symbol.even_bin() > n - 2 || symbol.odd_bin() > n - 1) {
        throw std::invalid_argument("symbol bins exceed N-1 for this spreading factor");
    }
}

}  // namespace

IqBuffer unchirped_symbol(const DmCssSymbol& symbol, SpreadingFactor sf) {
    check_symbol_range(symbol, sf);
    const int n = sf.num_bins();
    const IqBuffer& w = unit_roots(n);
    const double se = symbol.even_sign();
    const double so = symbol.odd_sign();
    IqBuffer f(n);
    for (int i = 0; i < n; ++i) {
        const auto ie = static_cast<std::int64_t>(symbol.even_bin()) * i % n;
        const auto io = static_cast<std::int64_t>(symbol.odd_bin()) * i % n;
        f[i] = se * w[ie] + so * w[io];
    }
    return f;
}

IqBuffer modulate(const DmCssSymbol& symbol, SpreadingFactor sf) {
    return unchirped_symbol(symbol, sf) * chirp(sf, symbol.slope());
}

double symbol_energy(const IqBuffer& buf) {
    if (buf.size() == 0) {
        throw std::invalid_argument("symbol_energy: empty buffer");
    }
    return buf.abs2().sum() / static_cast<double>(buf.size());
}

Complex inner_product(const IqBuffer& a, const IqBuffer& b) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("inner_product: length mismatch");
    }
    return (a * b.conjugate()).sum();
}

int dm_css_bits_per_symbol(SpreadingFactor sf) { return 2 * sf.value() + 1; }

DmCssSymbol symbol_from_word(std::uint64_t word, SpreadingFactor sf) {
    const int lam = sf.value();
    const int total = 2 * lam + 1;
    if ((word >> total) != 0) {
        throw std::invalid_argument("word has bits beyond the symbol's bit budget");
    }
    const std::uint64_t index_mask = (1ull << (lam - 1)) - 1;
    const ChirpSlope slope = ((word >> (total - 1)) & 1u) == 0 ? ChirpSlope::Up : ChirpSlope::Down;
    const int v_even = static_cast<int>((word >> (lam + 1)) & index_mask);
    const int v_odd = static_cast<int>((word >> 2) & index_mask);
    const int even_sign = ((word >> 1) & 1u) == 0 ? 1 : -1;
    const int odd_sign = (word & 1u) == 0 ? 1 : -1;
    return {sf, slope, 2 * v_even, 2 * v_odd + 1, even_sign, odd_sign};
}

std::uint64_t word_from_symbol(const DmCssSymbol& symbol, SpreadingFactor sf) {
    check_symbol_range(symbol, sf);
    const int lam = sf.value();
    const int total = 2 * lam + 1;
    std::uint64_t word = 0;
    word |= static_cast<std::uint64_t>(symbol.slope() == ChirpSlope::Down) << (total - 1);
    word |= static_cast<std::uint64_t>(symbol.even_bin() / 2) << (lam + 1);
    word |= static_cast<std::uint64_t>(symbol.odd_bin() / 2) << 2;
    word |= static_cast<std::uint64_t>(symbol.even_sign() < 0) << 1;
    word |= static_cast<std::uint64_t>(symbol.odd_sign() < 0);
    return word;
}

DmCssSymbol bits_to_symbol(const BitWord& bits, SpreadingFactor sf) {
    const std::size_t total = static_cast<std::size_t>(2 * sf.value() + 1);
    if (bits.size() != total) {
        throw std::invalid_argument("bit word must have 2*sf+1 bits, got " +
                                    std::to_string(bits.size()));
    }
    std::uint64_t word = 0;
    for (std::uint8_t b : bits) {
        if (b > 1) throw std::invalid_argument("bit values must be 0 or 1");
        word = (word << 1) | b;
    }
    return symbol_from_word(word, sf);
}

BitWord symbol_to_bits(const DmCssSymbol& symbol, SpreadingFactor sf) {
    const int total = 2 * sf.value() + 1;
    const std::uint64_t word = word_from_symbol(symbol, sf);
    BitWord bits(static_cast<std::size_t>(total));
    for (int i = 0; i < total; ++i) {
        bits[static_cast<std::size_t>(i)] = (word >> (total - 1 - i)) & 1u;
    }
    return bits;
}

}  // namespace dmcss
