#include "dmcss/channels.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace dmcss {

double sigma_for_ebn0(double ebn0_db, double symbol_energy_total, int bits_per_symbol) {
    if (!(symbol_energy_total > 0.0)) {
        throw std::invalid_argument("sigma_for_ebn0: symbol energy must be positive");
    }
    if (bits_per_symbol < 1) {
        throw std::invalid_argument("sigma_for_ebn0: bits per symbol must be >= 1");
    }
    const double energy_per_bit = symbol_energy_total / bits_per_symbol;
    return energy_per_bit / std::pow(10.0, ebn0_db / 10.0);
}

IqBuffer apply_awgn(const IqBuffer& s, double sigma2, RandomStream& rng) {
    if (sigma2 < 0.0) {
        throw std::invalid_argument("apply_awgn: variance must be nonnegative");
    }
    if (sigma2 == 0.0) return s;
    std::normal_distribution<double> gauss(0.0, std::sqrt(sigma2 / 2.0));
    IqBuffer out(s.size());
    for (Eigen::Index i = 0; i < s.size(); ++i) {
        const double re = gauss(rng);
        const double im = gauss(rng);
        out[i] = s[i] + Complex(re, im);
    }
    return out;
}

IqBuffer apply_fading(const IqBuffer& s, double rho) {
    if (rho < 0.0 || rho > 1.0) {
        throw std::invalid_argument("apply_fading: rho must be in [0, 1]");
    }
    const double a = std::sqrt(1.0 - rho);
    const double b = std::sqrt(rho);
    IqBuffer out(s.size());
    if (s.size() == 0) return out;
    out[0] = a * s[0];
    for (Eigen::Index i = 1; i < s.size(); ++i) {
        out[i] = a * s[i] + b * s[i - 1];
    }
    return out;
}

IqBuffer apply_phase_offset(const IqBuffer& s, double psi) {
    return s * Complex(std::cos(psi), std::sin(psi));
}

IqBuffer apply_freq_offset(const IqBuffer& s, double delta_f) {
    const double step = 2.0 * std::numbers::pi * delta_f / static_cast<double>(s.size());
    IqBuffer out(s.size());
    for (Eigen::Index i = 0; i < s.size(); ++i) {
        const double phase = step * static_cast<double>(i);
        out[i] = s[i] * Complex(std::cos(phase), std::sin(phase));
    }
    return out;
}

IqBuffer apply_channel(const IqBuffer& s, const ChannelSpec& spec, double sigma2,
                       RandomStream& rng) {
    IqBuffer r = spec.fading_enabled ? apply_fading(s, spec.rho) : s;
    if (spec.psi != 0.0) r = apply_phase_offset(r, spec.psi);
    if (spec.delta_f != 0.0) r = apply_freq_offset(r, spec.delta_f);
    return apply_awgn(r, sigma2, rng);
}

}  // namespace dmcss
