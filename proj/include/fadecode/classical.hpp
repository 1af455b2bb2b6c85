/*
Classical baselines: noncoherent orthogonal signaling, the (7,4) Hamming
code with hard syndrome decoding and soft maximum-likelihood decoding,
coherent combining, BPSK, and the closed-form oracles the Monte Carlo
results are checked against.
*/

#ifndef FADECODE_CLASSICAL_HPP
#define FADECODE_CLASSICAL_HPP

#include <array>
#include <complex>
#include <cstdint>
#include <span>

#include "fadecode/channel.hpp"

namespace fadecode {

// --- orthogonal signaling -------------------------------------------------

// bit 0 -> [1, 0]; bit 1 -> [0, 1]
std::array<double, 2> orth_encode(int bit);

// 0 iff |y1| > |y2|; ties resolve to 0
int orth_detect(std::complex<double> y1, std::complex<double> y2);

// --- (7,4) Hamming code ---------------------------------------------------

struct Hamming74 {
    // systematic G = [I | P], P rows: 110, 101, 011, 111
    std::array<std::array<std::uint8_t, 7>, 4> generator;
    std::array<std::array<std::uint8_t, 7>, 3> parity_check;
    std::array<int, 8> syndrome_to_position;  // [0] unused (-1)

    static const Hamming74& instance();
};

std::array<std::uint8_t, 7> hamming_encode(const std::array<std::uint8_t, 4>& data);
std::array<std::uint8_t, 4> syndrome_decode(std::array<std::uint8_t, 7> received);

// soft decoding: data bits of argmin over the 16 codewords c of
// sum_l |y[l] - h[l]*bpsk(c[l])|^2; ties resolve to the lowest codeword index
std::array<std::uint8_t, 4> hamming_soft_mld(std::span<const std::complex<double>> y,
                                             std::span<const std::complex<double>> h);

// --- coherent detection ---------------------------------------------------

// matched-filter statistic Re(conj(h)*y); h = 0 degenerates to 0
double coherent_combine(std::complex<double> y, std::complex<double> h);

inline double bpsk_map(int bit) { return bit ? -1.0 : 1.0; }
// sign decision; tie (statistic == 0) resolves to bit 0
inline int bpsk_detect(double statistic) { return statistic < 0.0 ? 1 : 0; }

// --- closed-form oracles (Rayleigh fading, E|h|^2 = 1) ----------------------

// noncoherent binary orthogonal: Pe = 1/(2 + chip_energy/(2*N0))
double oracle_orth_noncoherent_bler(const SnrPoint& snr, double chip_energy = 1.0);

// coherent BPSK bit error p = (1 - sqrt(g/(1+g)))/2 at mean SNR g
double oracle_coherent_bpsk_ber(double mean_snr);
// uncoded k-bit block over Rayleigh with CSIR: 1 - (1-p)^k, g = snr_linear
double oracle_uncoded_block(double snr_db, int k_bits);
// Hamming(7,4) hard with coherent combining: 1-(1-p)^7-7p(1-p)^6, g = (4/7)*snr_linear
double oracle_hamming_hard_block(double snr_db);

// exact post-syndrome-decoding DATA-BIT error rate of the no-CSI Hamming
// chain (chip error p = 1/(2 + (4/7)*snr_linear)), by enumeration of all
// 128 chip-error patterns
double oracle_hamming_hard_nocsi_bitber(double snr_db);
// the same enumeration as a function of an arbitrary i.i.d. chip error p
double hamming_postdecoding_bitber(double chip_error_p);

}  // namespace fadecode

#endif
