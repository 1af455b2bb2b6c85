#include "fadecode/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace fadecode {

double noise_param(const SnrPoint& snr) {
    const double lin = snr_linear(snr.snr_db);
    if (!snr.coded) return 1.0 / (2.0 * lin);
    if (snr.rate <= 0.0) throw std::invalid_argument("noise_param: coded rate must be positive");
    return 1.0 / (2.0 * snr.rate * lin);
}

void transmit_into(std::span<const double> codeword, const FadingSpec& spec, double n0, Rng& rng,
                   double* yr, double* yi, double* hr, double* hi) {
    if (n0 < 0.0) throw std::invalid_argument("transmit: negative noise parameter");
    const double noise_std = std::sqrt(n0);
    for (std::size_t l = 0; l < codeword.size(); ++l) {
        double h_r, h_i;
        if (spec.kind == FadingKind::degenerate) {
            h_r = 1.0;
            h_i = 0.0;
        } else {
            h_r = sample_fading_component(rng, spec);
            h_i = sample_fading_component(rng, spec);
        }
        // each real noise dimension has variance n0
        const double w_r = n0 == 0.0 ? 0.0 : noise_std * rng.normal();
        const double w_i = n0 == 0.0 ? 0.0 : noise_std * rng.normal();
        yr[l] = h_r * codeword[l] + w_r;
        yi[l] = h_i * codeword[l] + w_i;
        if (hr) hr[l] = h_r;
        if (hi) hi[l] = h_i;
    }
}

ChannelOutput transmit(std::span<const double> codeword, const FadingSpec& spec, double n0,
                       Rng& rng, ChannelMode mode) {
    const std::size_t n = codeword.size();
    std::vector<double> yr(n), yi(n), hr(n), hi(n);
    transmit_into(codeword, spec, n0, rng, yr.data(), yi.data(), hr.data(), hi.data());
    ChannelOutput out;
    out.n0 = n0;
    out.y.resize(n);
    for (std::size_t l = 0; l < n; ++l) out.y[l] = {yr[l], yi[l]};
    if (mode == ChannelMode::csir) {
        out.h.resize(n);
        for (std::size_t l = 0; l < n; ++l) out.h[l] = {hr[l], hi[l]};
    }
    return out;
}

void transmit_awgn_into(std::span<const double> codeword, double n0, Rng& rng, double* y) {
    if (n0 < 0.0) throw std::invalid_argument("transmit_awgn: negative noise parameter");
    const double noise_std = std::sqrt(n0);
    for (std::size_t l = 0; l < codeword.size(); ++l)
        y[l] = codeword[l] + (n0 == 0.0 ? 0.0 : noise_std * rng.normal());
}

std::vector<double> transmit_awgn(std::span<const double> codeword, double n0, Rng& rng) {
    std::vector<double> y(codeword.size());
    transmit_awgn_into(codeword, n0, rng, y.data());
    return y;
}

}  // namespace fadecode
