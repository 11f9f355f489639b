#include "dmcss/detectors.hpp"

#include <cmath>
#include <stdexcept>

#include "dmcss/css_core.hpp"
#include "dmcss/spectral.hpp"

namespace dmcss {

namespace {

void check_length(const IqBuffer& r, SpreadingFactor sf) {
    if (r.size() != sf.num_bins()) {
        throw std::invalid_argument("received buffer length does not match spreading factor");
    }
}

double max_norm(const Spectrum& bins) {
    double best = 0.0;
    for (Eigen::Index k = 0; k < bins.size(); ++k) {
        best = std::max(best, std::norm(bins[k]));
    }
    return best;
}

// Argmax of |bins[k]| over k = first, first+2, ...; lowest index wins ties.
int argmax_stride2(const Spectrum& bins, int first) {
    int best_k = first;
    double best = std::norm(bins[first]);
    for (Eigen::Index k = first + 2; k < bins.size(); k += 2) {
        const double v = std::norm(bins[k]);
        if (v > best) {
            best = v;
            best_k = static_cast<int>(k);
        }
    }
    return best_k;
}

}  // namespace

IqBuffer dechirp(const IqBuffer& r, ChirpSlope removed, SpreadingFactor sf) {
    check_length(r, sf);
    const ChirpSlope conj_slope = removed == ChirpSlope::Up ? ChirpSlope::Down : ChirpSlope::Up;
    return r * chirp(sf, conj_slope);
}

DetectionResult detect_dm_css(const IqBuffer& r, SpreadingFactor sf) {
    check_length(r, sf);
    const FftPlan& plan = fft_plan(sf.num_bins());

    Spectrum up_branch = r * chirp(sf, ChirpSlope::Down);
    plan.forward_inplace(up_branch);
    Spectrum down_branch = r * chirp(sf, ChirpSlope::Up);
    plan.forward_inplace(down_branch);

    const double up_peak2 = max_norm(up_branch);
    const double down_peak2 = max_norm(down_branch);
    const bool up_wins = up_peak2 >= down_peak2;
    const Spectrum& sel = up_wins ? up_branch : down_branch;

    const int even_bin = argmax_stride2(sel, 0);
    const int odd_bin = argmax_stride2(sel, 1);
    const int even_sign = sel[even_bin].real() < 0.0 ? -1 : 1;
    const int odd_sign = sel[odd_bin].real() < 0.0 ? -1 : 1;

    return {DmCssSymbol(sf, up_wins ? ChirpSlope::Up : ChirpSlope::Down, even_bin, odd_bin,
                        even_sign, odd_sign),
            std::sqrt(up_peak2), std::sqrt(down_peak2)};
}

std::size_t correlation_detect(const IqBuffer& r, std::span<const IqBuffer> candidates) {
    if (candidates.empty()) {
        throw std::invalid_argument("correlation_detect: empty candidate set");
    }
    std::size_t best_index = 0;
    double best = -1.0;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        const double metric = std::norm(inner_product(r, candidates[i]));
        if (metric > best) {
            best = metric;
            best_index = i;
        }
    }
    return best_index;
}

}  // namespace dmcss
