#include "fadecode/classical.hpp"

#include <cmath>

namespace fadecode {

std::array<double, 2> orth_encode(int bit) {
    return bit ? std::array<double, 2>{0.0, 1.0} : std::array<double, 2>{1.0, 0.0};
}

int orth_detect(std::complex<double> y1, std::complex<double> y2) {
    return std::norm(y1) >= std::norm(y2) ? 0 : 1;
}

namespace {

Hamming74 build_hamming() {
    Hamming74 code{};
    const std::uint8_t P[4][3] = {{1, 1, 0}, {1, 0, 1}, {0, 1, 1}, {1, 1, 1}};
    for (int i = 0; i < 4; ++i) {
        code.generator[i].fill(0);
        code.generator[i][i] = 1;
        for (int j = 0; j < 3; ++j) code.generator[i][4 + j] = P[i][j];
    }
    // H = [P^T | I3]
    for (int j = 0; j < 3; ++j) {
        code.parity_check[j].fill(0);
        for (int i = 0; i < 4; ++i) code.parity_check[j][i] = P[i][j];
        code.parity_check[j][4 + j] = 1;
    }
    code.syndrome_to_position.fill(-1);
    for (int pos = 0; pos < 7; ++pos) {
        int s = 0;
        for (int j = 0; j < 3; ++j) s |= int(code.parity_check[j][pos]) << j;
        code.syndrome_to_position[s] = pos;
    }
    return code;
}

}  // namespace

const Hamming74& Hamming74::instance() {
    static const Hamming74 code = build_hamming();
    return code;
}

std::array<std::uint8_t, 7> hamming_encode(const std::array<std::uint8_t, 4>& data) {
    const Hamming74& code = Hamming74::instance();
    std::array<std::uint8_t, 7> c{};
    for (int i = 0; i < 4; ++i) {
        if (!data[i]) continue;
        for (int l = 0; l < 7; ++l) c[l] ^= code.generator[i][l];
    }
    return c;
}

std::array<std::uint8_t, 4> syndrome_decode(std::array<std::uint8_t, 7> received) {
    const Hamming74& code = Hamming74::instance();
    int s = 0;
    for (int j = 0; j < 3; ++j) {
        std::uint8_t bit = 0;
        for (int l = 0; l < 7; ++l) bit ^= received[l] & code.parity_check[j][l];
        s |= int(bit) << j;
    }
    if (s != 0) received[code.syndrome_to_position[s]] ^= 1;
    return {received[0], received[1], received[2], received[3]};
}

std::array<std::uint8_t, 4> hamming_soft_mld(std::span<const std::complex<double>> y,
                                             std::span<const std::complex<double>> h) {
    double best_metric = 0.0;
    int best = -1;
    for (int msg = 0; msg < 16; ++msg) {
        const std::array<std::uint8_t, 4> data = {std::uint8_t(msg & 1), std::uint8_t((msg >> 1) & 1),
                                                  std::uint8_t((msg >> 2) & 1),
                                                  std::uint8_t((msg >> 3) & 1)};
        const auto cw = hamming_encode(data);
        double metric = 0.0;
        for (int l = 0; l < 7; ++l) metric += std::norm(y[l] - h[l] * bpsk_map(cw[l]));
        if (best < 0 || metric < best_metric) {
            best_metric = metric;
            best = msg;
        }
    }
    return {std::uint8_t(best & 1), std::uint8_t((best >> 1) & 1), std::uint8_t((best >> 2) & 1),
            std::uint8_t((best >> 3) & 1)};
}

double coherent_combine(std::complex<double> y, std::complex<double> h) {
    return (std::conj(h) * y).real();
}

double oracle_orth_noncoherent_bler(const SnrPoint& snr, double chip_energy) {
    const double n0 = noise_param(snr);
    return 1.0 / (2.0 + chip_energy / (2.0 * n0));
}

double oracle_coherent_bpsk_ber(double mean_snr) {
    return 0.5 * (1.0 - std::sqrt(mean_snr / (1.0 + mean_snr)));
}

double oracle_uncoded_block(double snr_db, int k_bits) {
    const double p = oracle_coherent_bpsk_ber(snr_linear(snr_db));
    return 1.0 - std::pow(1.0 - p, double(k_bits));
}

double oracle_hamming_hard_block(double snr_db) {
    const double p = oracle_coherent_bpsk_ber(4.0 / 7.0 * snr_linear(snr_db));
    return 1.0 - std::pow(1.0 - p, 7.0) - 7.0 * p * std::pow(1.0 - p, 6.0);
}

double hamming_postdecoding_bitber(double chip_error_p) {
    const Hamming74& code = Hamming74::instance();
    double ber = 0.0;
    // linearity: fix the all-zero codeword and enumerate chip error patterns
    for (int e = 0; e < 128; ++e) {
        const int w = __builtin_popcount(unsigned(e));
        const double prob =
            std::pow(chip_error_p, double(w)) * std::pow(1.0 - chip_error_p, double(7 - w));
        std::array<std::uint8_t, 7> r{};
        for (int l = 0; l < 7; ++l) r[l] = std::uint8_t((e >> l) & 1);
        int s = 0;
        for (int j = 0; j < 3; ++j) {
            std::uint8_t bit = 0;
            for (int l = 0; l < 7; ++l) bit ^= r[l] & code.parity_check[j][l];
            s |= int(bit) << j;
        }
        if (s != 0) r[code.syndrome_to_position[s]] ^= 1;
        ber += prob * double(r[0] + r[1] + r[2] + r[3]) / 4.0;
    }
    return ber;
}

double oracle_hamming_hard_nocsi_bitber(double snr_db) {
    const double p = 1.0 / (2.0 + 4.0 / 7.0 * snr_linear(snr_db));
    return hamming_postdecoding_bitber(p);
}

}  // namespace fadecode
