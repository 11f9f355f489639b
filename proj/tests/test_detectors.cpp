#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <doctest.h>

#include "dmcss/css_core.hpp"
#include "dmcss/detectors.hpp"
#include "dmcss/channels.hpp"

using namespace dmcss;

namespace {

IqBuffer noisy(const IqBuffer& s, double sigma2, unsigned seed) {
    RandomStream rng(seed);
    return apply_awgn(s, sigma2, rng);
}

// All DM-CSS waveforms of one spreading factor, candidate index == word.
std::vector<IqBuffer> full_waveform_set(SpreadingFactor sf) {
    std::vector<IqBuffer> set;
    const std::uint64_t total = 1ull << (2 * sf.value() + 1);
    set.reserve(total);
    for (std::uint64_t w = 0; w < total; ++w) {
        set.push_back(modulate(symbol_from_word(w, sf), sf));
    }
    return set;
}

}  // namespace

TEST_CASE("dechirp") {
    const SpreadingFactor sf(3);
    const DmCssSymbol sym{sf, ChirpSlope::Up, 2, 7, 1, -1};

    CHECK((dechirp(modulate(sym, sf), ChirpSlope::Up, sf) - unchirped_symbol(sym, sf))
              .abs()
              .maxCoeff() < 1e-12);
    CHECK((dechirp(up_chirp(sf), ChirpSlope::Up, sf) - IqBuffer::Ones(8)).abs().maxCoeff() <
          1e-12);

    SUBCASE("noisy buffer matches the scalar product oracle") {
        const IqBuffer r = noisy(modulate(sym, sf), 0.5, 42);
        const IqBuffer got = dechirp(r, ChirpSlope::Up, sf);
        for (int i = 0; i < 8; ++i) {
            const Complex c = std::polar(1.0, -2.0 * std::numbers::pi * i * i / 8.0);
            CHECK(std::abs(got[i] - r[i] * c) < 1e-12);
        }
    }

    CHECK_THROWS_AS(dechirp(IqBuffer::Zero(4), ChirpSlope::Up, sf), std::invalid_argument);
}

TEST_CASE("noiseless roundtrip is exact for every word") {
    for (int lam : {4, 6}) {
        const SpreadingFactor sf(lam);
        const std::uint64_t total = 1ull << (2 * lam + 1);
        for (std::uint64_t w = 0; w < total; ++w) {
            const DetectionResult d = detect_dm_css(modulate(symbol_from_word(w, sf), sf), sf);
            REQUIRE(word_from_symbol(d.symbol, sf) == w);
        }
    }
}

TEST_CASE("branch peaks of a noiseless up symbol") {
    // Correct-branch bins reach N exactly; the wrong branch only sees the
    // residual double-rate chirp, whose Gauss sums stay below 2*sqrt(2N).
    const SpreadingFactor sf(4);
    const double n = 16.0;
    double worst_wrong = 0.0;
    for (std::uint64_t w = 0; w < (1ull << 9); ++w) {
        const DmCssSymbol sym = symbol_from_word(w, sf);
        if (sym.slope() != ChirpSlope::Up) continue;
        const DetectionResult d = detect_dm_css(modulate(sym, sf), sf);
        CHECK(d.up_peak == doctest::Approx(n).epsilon(1e-9));
        CHECK(d.down_peak < d.up_peak);
        worst_wrong = std::max(worst_wrong, d.down_peak);
    }
    CHECK(worst_wrong <= 2.0 * std::sqrt(2.0 * n) + 1e-9);
    CHECK(worst_wrong > 0.0);
}

TEST_CASE("detector decision invariances") {
    const SpreadingFactor sf(6);
    std::mt19937 seeder(3);

    SUBCASE("scale invariance") {
        for (double scale : {1e-3, 7.0, 1e3}) {
            for (unsigned seed = 0; seed < 20; ++seed) {
                const std::uint64_t w = seeder() & ((1ull << 13) - 1);
                const IqBuffer r = noisy(modulate(symbol_from_word(w, sf), sf), 3.0, 100 + seed);
                const DetectionResult a = detect_dm_css(r, sf);
                const DetectionResult b = detect_dm_css((scale * r).eval(), sf);
                CHECK(a.symbol == b.symbol);
            }
        }
    }

    SUBCASE("negating one transmit sign flips only that decision") {
        for (unsigned i = 0; i < 50; ++i) {
            const std::uint64_t w = seeder() & ((1ull << 13) - 1);
            const DmCssSymbol sym = symbol_from_word(w, sf);
            const DmCssSymbol flipped{sf, sym.slope(), sym.even_bin(), sym.odd_bin(),
                                      -sym.even_sign(), sym.odd_sign()};
            const DetectionResult a = detect_dm_css(modulate(sym, sf), sf);
            const DetectionResult b = detect_dm_css(modulate(flipped, sf), sf);
            CHECK(b.symbol.even_sign() == -a.symbol.even_sign());
            CHECK(b.symbol.odd_sign() == a.symbol.odd_sign());
            CHECK(b.symbol.even_bin() == a.symbol.even_bin());
            CHECK(b.symbol.odd_bin() == a.symbol.odd_bin());
            CHECK(b.symbol.slope() == a.symbol.slope());
        }
    }

    SUBCASE("conjugating the input swaps the branch roles") {
        const int n = sf.num_bins();
        for (unsigned i = 0; i < 50; ++i) {
            const std::uint64_t w = seeder() & ((1ull << 13) - 1);
            const DmCssSymbol sym = symbol_from_word(w, sf);
            const IqBuffer r = modulate(sym, sf);
            const DetectionResult fwd = detect_dm_css(r, sf);
            const DetectionResult rev = detect_dm_css(r.conjugate().eval(), sf);
            CHECK(rev.up_peak == doctest::Approx(fwd.down_peak).epsilon(1e-9));
            CHECK(rev.down_peak == doctest::Approx(fwd.up_peak).epsilon(1e-9));
            // conj maps the symbol to (slope flipped, bins negated mod N, same signs)
            CHECK(rev.symbol.slope() ==
                  (sym.slope() == ChirpSlope::Up ? ChirpSlope::Down : ChirpSlope::Up));
            CHECK(rev.symbol.even_bin() == (n - sym.even_bin()) % n);
            CHECK(rev.symbol.odd_bin() == n - sym.odd_bin());
            CHECK(rev.symbol.even_sign() == sym.even_sign());
            CHECK(rev.symbol.odd_sign() == sym.odd_sign());
        }
    }
}

TEST_CASE("correlation detector") {
    const SpreadingFactor sf(4);

    SUBCASE("orthogonal candidates, exact hit") {
        std::vector<IqBuffer> cands;
        for (int k = 0; k < 16; k += 2) {
            cands.push_back(modulate({sf, ChirpSlope::Up, k, 1, 1, 1}, sf));
        }
        CHECK(correlation_detect(cands[3], cands) == 3);
    }

    SUBCASE("ties break to the lowest index") {
        std::vector<IqBuffer> cands(3, up_chirp(sf));
        CHECK(correlation_detect(up_chirp(sf), cands) == 0);
    }

    SUBCASE("input validation") {
        std::vector<IqBuffer> empty;
        CHECK_THROWS_AS(correlation_detect(up_chirp(sf), empty), std::invalid_argument);
        std::vector<IqBuffer> wrong{IqBuffer::Zero(8)};
        CHECK_THROWS_AS(correlation_detect(up_chirp(sf), wrong), std::invalid_argument);
    }
}

TEST_CASE("envelope ML identifies DM-CSS symbols up to the global sign pair") {
    // |<r, s>| = |<r, -s>| exactly, and -s is the same symbol with both
    // signs flipped, so pure envelope correlation can never split that pair;
    // the detector's real-part polarity step is what resolves it.
    const SpreadingFactor sf(4);
    const std::vector<IqBuffer> set = full_waveform_set(sf);

    SUBCASE("noiseless: winner is the transmitted word or its exact-tied antipode") {
        for (std::uint64_t w = 0; w < set.size(); ++w) {
            const IqBuffer& r = set[w];
            const std::size_t win = correlation_detect(r, set);
            const std::uint64_t antipode = w ^ 0b11u;
            REQUIRE((win == w || win == antipode));
            const double mw = std::abs(inner_product(r, set[w]));
            const double ma = std::abs(inner_product(r, set[antipode]));
            REQUIRE(std::abs(mw - ma) <= 1e-9 * mw);
            // the full detector recovers the exact word, signs included
            REQUIRE(word_from_symbol(detect_dm_css(r, sf).symbol, sf) == w);
        }
    }

    SUBCASE("awgn smoke: class decisions agree almost always") {
        const double sigma2 = sigma_for_ebn0(5.0, 32.0, 9);
        int agree = 0;
        const int trials = 200;
        std::mt19937 seeder(17);
        for (int t = 0; t < trials; ++t) {
            const std::uint64_t w = seeder() & 0x1FF;
            const IqBuffer r = noisy(modulate(symbol_from_word(w, sf), sf), sigma2, 500 + t);
            const std::uint64_t oracle = correlation_detect(r, set);
            const std::uint64_t fast = word_from_symbol(detect_dm_css(r, sf).symbol, sf);
            if (oracle == fast || oracle == (fast ^ 0b11u)) {
                ++agree;
            }
        }
        CHECK(agree >= trials * 95 / 100);
    }
}
