/*
SNR conventions and the per-symbol channel law y[l] = h[l]x[l] + w[l].

Noise convention: the parameter N0 returned by noise_param is the variance
of EACH real dimension of the complex noise (total complex noise power
2*N0). Together with E|h|^2 = 1 this reproduces the classical noncoherent
curve 1/(2 + snr_linear) and the coherent Rayleigh BPSK curve.
*/

#ifndef FADECODE_CHANNEL_HPP
#define FADECODE_CHANNEL_HPP

#include <cmath>
#include <complex>
#include <span>
#include <vector>

#include "fadecode/fading.hpp"
#include "fadecode/rng.hpp"

namespace fadecode {

struct SnrPoint {
    double snr_db = 0.0;
    double rate = 1.0;  // R = log2(M)/n, used only when coded
    bool coded = false;
};

inline double snr_linear(double snr_db) { return std::pow(10.0, snr_db / 10.0); }

// uncoded: N0 = 1/(2*snr); coded: N0 = 1/(2*R*snr).
// throws std::invalid_argument if coded with rate <= 0
double noise_param(const SnrPoint& snr);

enum class ChannelMode { no_csi, csir, awgn };

struct ChannelOutput {
    std::vector<std::complex<double>> y;
    std::vector<std::complex<double>> h;  // filled only in csir mode
    double n0 = 0.0;
};

// Writes y = h.*c + w symbol by symbol into the provided spans.
// Per symbol the draw order is h_r, h_i, then the two noise components,
// so no_csi and csir consume identical randomness. hr/hi may be null when
// the caller does not need the coefficients.
void transmit_into(std::span<const double> codeword, const FadingSpec& spec, double n0,
                   Rng& rng, double* yr, double* yi, double* hr, double* hi);

ChannelOutput transmit(std::span<const double> codeword, const FadingSpec& spec, double n0,
                       Rng& rng, ChannelMode mode);

// real AWGN channel: y_l = c_l + N(0, n0)
void transmit_awgn_into(std::span<const double> codeword, double n0, Rng& rng, double* y);
std::vector<double> transmit_awgn(std::span<const double> codeword, double n0, Rng& rng);

}  // namespace fadecode

#endif
