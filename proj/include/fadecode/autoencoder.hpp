/*
Encoder-channel-decoder assembly and the training loop for the three
channel modes (no-CSI fading, CSIR fading, AWGN).
*/

#ifndef FADECODE_AUTOENCODER_HPP
#define FADECODE_AUTOENCODER_HPP

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "fadecode/channel.hpp"
#include "fadecode/fading.hpp"
#include "fadecode/network.hpp"

namespace fadecode {

struct TrainingError : std::runtime_error {
    std::int64_t step;
    TrainingError(const std::string& what, std::int64_t step_index)
        : std::runtime_error(what), step(step_index) {}
};

struct AutoencoderConfig {
    std::size_t M = 2;
    std::size_t n = 2;
    ChannelMode mode = ChannelMode::no_csi;
    FadingSpec fading = normalize_spec(FadingKind::rayleigh);  // unused in awgn mode
    double train_snr_db = 7.0;
    std::int64_t steps = 20000;
    std::size_t batch_size = 256;
    double lr = 1e-3;
    std::uint64_t seed = 1;
    std::vector<std::size_t> encoder_hidden;  // empty -> {4M}
    std::vector<std::size_t> decoder_hidden;  // empty -> {8M, 4M}

    double rate() const { return std::log2(double(M)) / double(n); }
    // decoder input width: no_csi 2n, csir 4n, awgn n
    std::size_t decoder_input_dim() const;
};

struct TrainedSystem {
    Network encoder;  // one-hot(M) -> n reals, energy n
    Network decoder;  // mode-dependent input -> M probabilities
    AutoencoderConfig config;
    double final_loss = 0.0;
    std::vector<double> loss_trace;

    // all M codewords as an M x n matrix
    Matrix codebook() const;

    void save(const std::filesystem::path& model_path) const;  // + ".meta" sidecar
    static TrainedSystem load(const std::filesystem::path& model_path);
};

// forward pass of the encoder on one-hot(m); throws std::invalid_argument
// for out-of-range m
std::vector<double> encode_message(const TrainedSystem& system, std::size_t m);

// decoder feature layout: no_csi [y_r;y_i], csir [y_r;y_i;h_r;h_i], awgn y
std::vector<double> decoder_features(ChannelMode mode, std::span<const double> yr,
                                     std::span<const double> yi, std::span<const double> hr,
                                     std::span<const double> hi);

// gradient through the stochastic channel layer with h, w held constant:
// dL/dc = h_r .* dL/dy_r + h_i .* dL/dy_i
void channel_layer_backward(std::span<const double> hr, std::span<const double> hi,
                            std::span<const double> dyr, std::span<const double> dyi,
                            std::span<double> dc);

TrainedSystem train(const AutoencoderConfig& config);

// argmax of decoder probabilities; ties resolve to the lowest index.
// throws std::invalid_argument on feature dimension mismatch
std::size_t decode(const TrainedSystem& system, std::span<const double> features);

// apply an AWGN-trained system over a fading channel with CSIR:
// z_l = Re(conj(h_l) y_l)/|h_l| (0 when |h_l| vanishes), fed to the decoder
std::size_t transfer_awgn_to_fading(const TrainedSystem& awgn_system,
                                    std::span<const std::complex<double>> y,
                                    std::span<const std::complex<double>> h);

std::string channel_mode_name(ChannelMode mode);
ChannelMode parse_channel_mode(const std::string& name);

}  // namespace fadecode

#endif
