#include "fadecode/chains.hpp"

#include <cmath>
#include <cstring>

#include "fadecode/classical.hpp"

namespace fadecode {

OrthClassicalChain::OrthClassicalChain(FadingSpec spec) : spec_(spec) {}

TrialCounts OrthClassicalChain::run(double snr_db, Rng& rng, std::uint64_t trials) const {
    const double n0 = noise_param({snr_db, 1.0, false});
    TrialCounts counts{0, trials};
    double yr[2], yi[2];
    for (std::uint64_t t = 0; t < trials; ++t) {
        const int bit = int(rng.uniform_below(2));
        const auto chips = orth_encode(bit);
        transmit_into(chips, spec_, n0, rng, yr, yi, nullptr, nullptr);
        const int detected = orth_detect({yr[0], yi[0]}, {yr[1], yi[1]});
        counts.errors += std::uint64_t(detected != bit);
    }
    return counts;
}

HammingHardNoCsiChain::HammingHardNoCsiChain(FadingSpec spec) : spec_(spec) {}

TrialCounts HammingHardNoCsiChain::run(double snr_db, Rng& rng, std::uint64_t trials) const {
    // each coded bit rides on 2 channel uses (unit-energy chips); the
    // published curve scores the 4 data bits individually
    const double n0 = noise_param({snr_db, 4.0 / 7.0, true});
    TrialCounts counts{0, 4 * trials};
    double yr[2], yi[2];
    for (std::uint64_t t = 0; t < trials; ++t) {
        std::array<std::uint8_t, 4> data;
        for (auto& d : data) d = std::uint8_t(rng.uniform_below(2));
        const auto cw = hamming_encode(data);
        std::array<std::uint8_t, 7> hard{};
        for (int l = 0; l < 7; ++l) {
            const auto chips = orth_encode(cw[l]);
            transmit_into(chips, spec_, n0, rng, yr, yi, nullptr, nullptr);
            hard[l] = std::uint8_t(orth_detect({yr[0], yi[0]}, {yr[1], yi[1]}));
        }
        const auto decoded = syndrome_decode(hard);
        for (int i = 0; i < 4; ++i) counts.errors += std::uint64_t(decoded[i] != data[i]);
    }
    return counts;
}

UncodedCsirChain::UncodedCsirChain(FadingSpec spec) : spec_(spec) {}

TrialCounts UncodedCsirChain::run(double snr_db, Rng& rng, std::uint64_t trials) const {
    const double n0 = noise_param({snr_db, 1.0, false});
    TrialCounts counts{0, trials};
    double sym[1], yr[1], yi[1], hr[1], hi[1];
    for (std::uint64_t t = 0; t < trials; ++t) {
        bool block_error = false;
        for (int i = 0; i < 4; ++i) {
            const int bit = int(rng.uniform_below(2));
            sym[0] = bpsk_map(bit);
            transmit_into(sym, spec_, n0, rng, yr, yi, hr, hi);
            const double stat = coherent_combine({yr[0], yi[0]}, {hr[0], hi[0]});
            if (bpsk_detect(stat) != bit) block_error = true;
        }
        counts.errors += std::uint64_t(block_error);
    }
    return counts;
}

HammingHardCsirChain::HammingHardCsirChain(FadingSpec spec) : spec_(spec) {}

TrialCounts HammingHardCsirChain::run(double snr_db, Rng& rng, std::uint64_t trials) const {
    const double n0 = noise_param({snr_db, 4.0 / 7.0, true});
    TrialCounts counts{0, trials};
    double sym[7], yr[7], yi[7], hr[7], hi[7];
    for (std::uint64_t t = 0; t < trials; ++t) {
        std::array<std::uint8_t, 4> data;
        for (auto& d : data) d = std::uint8_t(rng.uniform_below(2));
        const auto cw = hamming_encode(data);
        for (int l = 0; l < 7; ++l) sym[l] = bpsk_map(cw[l]);
        transmit_into(sym, spec_, n0, rng, yr, yi, hr, hi);
        std::array<std::uint8_t, 7> hard{};
        for (int l = 0; l < 7; ++l) {
            const double stat = coherent_combine({yr[l], yi[l]}, {hr[l], hi[l]});
            hard[l] = std::uint8_t(bpsk_detect(stat));
        }
        counts.errors += std::uint64_t(syndrome_decode(hard) != data);
    }
    return counts;
}

HammingMldCsirChain::HammingMldCsirChain(FadingSpec spec) : spec_(spec) {}

TrialCounts HammingMldCsirChain::run(double snr_db, Rng& rng, std::uint64_t trials) const {
    const double n0 = noise_param({snr_db, 4.0 / 7.0, true});
    TrialCounts counts{0, trials};
    double sym[7], yr[7], yi[7], hr[7], hi[7];
    std::complex<double> y[7], h[7];
    for (std::uint64_t t = 0; t < trials; ++t) {
        std::array<std::uint8_t, 4> data;
        for (auto& d : data) d = std::uint8_t(rng.uniform_below(2));
        const auto cw = hamming_encode(data);
        for (int l = 0; l < 7; ++l) sym[l] = bpsk_map(cw[l]);
        transmit_into(sym, spec_, n0, rng, yr, yi, hr, hi);
        for (int l = 0; l < 7; ++l) {
            y[l] = {yr[l], yi[l]};
            h[l] = {hr[l], hi[l]};
        }
        counts.errors += std::uint64_t(hamming_soft_mld({y, 7}, {h, 7}) != data);
    }
    return counts;
}

// --- learned chains -----------------------------------------------------------

namespace {
constexpr std::size_t kEvalBatch = 512;

std::size_t argmax_row(const double* row, std::size_t n) {
    std::size_t best = 0;
    for (std::size_t c = 1; c < n; ++c)
        if (row[c] > row[best]) best = c;
    return best;
}
}  // namespace

LearnedChain::LearnedChain(const TrainedSystem& system, std::string label)
    : system_(system), codebook_(system.codebook()), label_(std::move(label)) {}

TrialCounts LearnedChain::run(double snr_db, Rng& rng, std::uint64_t trials) const {
    const auto& cfg = system_.config;
    const std::size_t n = cfg.n;
    const double n0 = noise_param({snr_db, cfg.rate(), true});
    TrialCounts counts{0, trials};

    std::vector<std::size_t> msgs(kEvalBatch);
    Matrix features(kEvalBatch, cfg.decoder_input_dim());
    std::uint64_t done = 0;
    while (done < trials) {
        const std::size_t batch = std::size_t(std::min<std::uint64_t>(kEvalBatch, trials - done));
        // randomness strictly in trial order: message, then channel draws
        for (std::size_t b = 0; b < batch; ++b) {
            const std::size_t m = rng.uniform_below(cfg.M);
            msgs[b] = m;
            std::span<const double> cw{codebook_.row(m), n};
            double* frow = features.row(b);
            if (cfg.mode == ChannelMode::awgn) {
                transmit_awgn_into(cw, n0, rng, frow);
            } else if (cfg.mode == ChannelMode::no_csi) {
                transmit_into(cw, cfg.fading, n0, rng, frow, frow + n, nullptr, nullptr);
            } else {
                transmit_into(cw, cfg.fading, n0, rng, frow, frow + n, frow + 2 * n, frow + 3 * n);
            }
        }
        Matrix logits;
        if (batch == kEvalBatch) {
            logits = system_.decoder.forward_logits(features);
        } else {
            Matrix partial(batch, features.cols);
            std::memcpy(partial.data.data(), features.data.data(),
                        batch * features.cols * sizeof(double));
            logits = system_.decoder.forward_logits(partial);
        }
        for (std::size_t b = 0; b < batch; ++b)
            counts.errors += std::uint64_t(argmax_row(logits.row(b), cfg.M) != msgs[b]);
        done += batch;
    }
    return counts;
}

AwgnTransferChain::AwgnTransferChain(const TrainedSystem& awgn_system, FadingSpec spec,
                                     std::string label)
    : system_(awgn_system), spec_(spec), codebook_(awgn_system.codebook()),
      label_(std::move(label)) {}

TrialCounts AwgnTransferChain::run(double snr_db, Rng& rng, std::uint64_t trials) const {
    const auto& cfg = system_.config;
    const std::size_t n = cfg.n;
    const double n0 = noise_param({snr_db, cfg.rate(), true});
    TrialCounts counts{0, trials};

    std::vector<std::size_t> msgs(kEvalBatch);
    std::vector<double> yr(n), yi(n), hr(n), hi(n);
    Matrix features(kEvalBatch, n);
    std::uint64_t done = 0;
    while (done < trials) {
        const std::size_t batch = std::size_t(std::min<std::uint64_t>(kEvalBatch, trials - done));
        for (std::size_t b = 0; b < batch; ++b) {
            const std::size_t m = rng.uniform_below(cfg.M);
            msgs[b] = m;
            std::span<const double> cw{codebook_.row(m), n};
            transmit_into(cw, spec_, n0, rng, yr.data(), yi.data(), hr.data(), hi.data());
            double* frow = features.row(b);
            for (std::size_t l = 0; l < n; ++l) {
                // scaled matched filter before the AWGN decoder
                const double mag = std::hypot(hr[l], hi[l]);
                frow[l] = mag < 1e-12 ? 0.0 : (hr[l] * yr[l] + hi[l] * yi[l]) / mag;
            }
        }
        Matrix logits;
        if (batch == kEvalBatch) {
            logits = system_.decoder.forward_logits(features);
        } else {
            Matrix partial(batch, features.cols);
            std::memcpy(partial.data.data(), features.data.data(),
                        batch * features.cols * sizeof(double));
            logits = system_.decoder.forward_logits(partial);
        }
        for (std::size_t b = 0; b < batch; ++b)
            counts.errors += std::uint64_t(argmax_row(logits.row(b), cfg.M) != msgs[b]);
        done += batch;
    }
    return counts;
}

std::unique_ptr<Chain> make_baseline_chain(const std::string& name) {
    if (name == "orth_classical") return std::make_unique<OrthClassicalChain>();
    if (name == "hamming_hard_nocsi") return std::make_unique<HammingHardNoCsiChain>();
    if (name == "uncoded_csir") return std::make_unique<UncodedCsirChain>();
    if (name == "hamming_hard_csir") return std::make_unique<HammingHardCsirChain>();
    if (name == "hamming_mld_csir") return std::make_unique<HammingMldCsirChain>();
    return nullptr;
}

std::vector<std::string> baseline_names() {
    return {"orth_classical", "hamming_hard_nocsi", "uncoded_csir", "hamming_hard_csir",
            "hamming_mld_csir"};
}

}  // namespace fadecode
