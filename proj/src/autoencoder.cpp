#include "fadecode/autoencoder.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>
#include <sstream>

#include "fadecode/config.hpp"
#include "fadecode/kernels.hpp"

namespace fadecode {

std::size_t AutoencoderConfig::decoder_input_dim() const {
    switch (mode) {
        case ChannelMode::no_csi: return 2 * n;
        case ChannelMode::csir: return 4 * n;
        case ChannelMode::awgn: return n;
    }
    return 0;
}

std::string channel_mode_name(ChannelMode mode) {
    switch (mode) {
        case ChannelMode::no_csi: return "no_csi";
        case ChannelMode::csir: return "csir";
        case ChannelMode::awgn: return "awgn";
    }
    return "?";
}

ChannelMode parse_channel_mode(const std::string& name) {
    if (name == "no_csi") return ChannelMode::no_csi;
    if (name == "csir") return ChannelMode::csir;
    if (name == "awgn") return ChannelMode::awgn;
    throw std::invalid_argument("unknown channel mode: " + name);
}

namespace {

std::vector<std::size_t> encoder_widths(const AutoencoderConfig& cfg) {
    return cfg.encoder_hidden.empty() ? std::vector<std::size_t>{4 * cfg.M} : cfg.encoder_hidden;
}

std::vector<std::size_t> decoder_widths(const AutoencoderConfig& cfg) {
    return cfg.decoder_hidden.empty() ? std::vector<std::size_t>{8 * cfg.M, 4 * cfg.M}
                                      : cfg.decoder_hidden;
}

Network build_encoder(const AutoencoderConfig& cfg) {
    Network net;
    std::size_t prev = cfg.M;
    for (std::size_t width : encoder_widths(cfg)) {
        net.add_dense(prev, width);
        net.add_relu();
        prev = width;
    }
    net.add_dense(prev, cfg.n);
    net.add_energy_normalize(double(cfg.n));
    return net;
}

Network build_decoder(const AutoencoderConfig& cfg) {
    Network net;
    std::size_t prev = cfg.decoder_input_dim();
    for (std::size_t width : decoder_widths(cfg)) {
        net.add_dense(prev, width);
        net.add_relu();
        prev = width;
    }
    net.add_dense(prev, cfg.M);
    net.add_softmax();
    return net;
}

}  // namespace

std::vector<double> decoder_features(ChannelMode mode, std::span<const double> yr,
                                     std::span<const double> yi, std::span<const double> hr,
                                     std::span<const double> hi) {
    const std::size_t n = yr.size();
    switch (mode) {
        case ChannelMode::awgn: {
            if (!yi.empty() || !hr.empty() || !hi.empty())
                throw std::invalid_argument("decoder_features: awgn takes the real part only");
            return {yr.begin(), yr.end()};
        }
        case ChannelMode::no_csi: {
            if (yi.size() != n || !hr.empty() || !hi.empty())
                throw std::invalid_argument("decoder_features: no_csi takes y_r and y_i only");
            std::vector<double> f;
            f.reserve(2 * n);
            f.insert(f.end(), yr.begin(), yr.end());
            f.insert(f.end(), yi.begin(), yi.end());
            return f;
        }
        case ChannelMode::csir: {
            if (yi.size() != n || hr.size() != n || hi.size() != n)
                throw std::invalid_argument("decoder_features: csir needs y and h parts");
            std::vector<double> f;
            f.reserve(4 * n);
            f.insert(f.end(), yr.begin(), yr.end());
            f.insert(f.end(), yi.begin(), yi.end());
            f.insert(f.end(), hr.begin(), hr.end());
            f.insert(f.end(), hi.begin(), hi.end());
            return f;
        }
    }
    throw std::invalid_argument("decoder_features: bad mode");
}

void channel_layer_backward(std::span<const double> hr, std::span<const double> hi,
                            std::span<const double> dyr, std::span<const double> dyi,
                            std::span<double> dc) {
    for (std::size_t l = 0; l < dc.size(); ++l) dc[l] = hr[l] * dyr[l] + hi[l] * dyi[l];
}

Matrix TrainedSystem::codebook() const {
    Matrix onehot(config.M, config.M);
    for (std::size_t m = 0; m < config.M; ++m) onehot(m, m) = 1.0;
    return encoder.forward(onehot);
}

std::vector<double> encode_message(const TrainedSystem& system, std::size_t m) {
    if (m >= system.config.M) throw std::invalid_argument("encode_message: message out of range");
    Matrix onehot(1, system.config.M);
    onehot(0, m) = 1.0;
    Matrix out = system.encoder.forward(onehot);
    return {out.row(0), out.row(0) + out.cols};
}

std::size_t decode(const TrainedSystem& system, std::span<const double> features) {
    if (features.size() != system.config.decoder_input_dim())
        throw std::invalid_argument("decode: feature dimension mismatch");
    Matrix x(1, features.size());
    std::memcpy(x.row(0), features.data(), features.size() * sizeof(double));
    Matrix probs = system.decoder.forward(x);
    std::size_t best = 0;
    for (std::size_t c = 1; c < probs.cols; ++c)
        if (probs(0, c) > probs(0, best)) best = c;
    return best;
}

std::size_t transfer_awgn_to_fading(const TrainedSystem& awgn_system,
                                    std::span<const std::complex<double>> y,
                                    std::span<const std::complex<double>> h) {
    std::vector<double> z(y.size());
    for (std::size_t l = 0; l < y.size(); ++l) {
        const double mag = std::abs(h[l]);
        z[l] = mag < 1e-12 ? 0.0 : (std::conj(h[l]) * y[l]).real() / mag;
    }
    return decode(awgn_system, z);
}

TrainedSystem train(const AutoencoderConfig& config) {
    if (config.M < 2) throw std::invalid_argument("train: M must be at least 2");
    if (config.n < 1) throw std::invalid_argument("train: n must be at least 1");
    if (config.batch_size < 1) throw std::invalid_argument("train: batch_size must be at least 1");

    TrainedSystem sys;
    sys.config = config;
    sys.encoder = build_encoder(config);
    sys.decoder = build_decoder(config);

    Rng init_rng(config.seed, 0);
    sys.encoder.init_weights(init_rng);
    sys.decoder.init_weights(init_rng);

    Rng msg_rng(config.seed, 1);
    Rng chan_rng(config.seed, 2);

    const double n0 = noise_param({config.train_snr_db, config.rate(), true});
    const std::size_t B = config.batch_size;
    const std::size_t n = config.n;
    const std::size_t dec_in = config.decoder_input_dim();

    AdamState enc_state(config.lr);
    AdamState dec_state(config.lr);

    Matrix onehot(B, config.M);
    Matrix features(B, dec_in);
    Matrix hr(B, n), hi(B, n);
    Matrix dcode(B, n);
    Matrix dlogits;

    auto run_batch = [&](bool update) -> double {
        onehot.fill(0.0);
        for (std::size_t b = 0; b < B; ++b) onehot(b, msg_rng.uniform_below(config.M)) = 1.0;

        Matrix code = sys.encoder.forward(onehot, /*cache=*/update);

        for (std::size_t b = 0; b < B; ++b) {
            std::span<const double> cw{code.row(b), n};
            double* frow = features.row(b);
            if (config.mode == ChannelMode::awgn) {
                transmit_awgn_into(cw, n0, chan_rng, frow);
            } else {
                transmit_into(cw, config.fading, n0, chan_rng, frow, frow + n, hr.row(b),
                              hi.row(b));
                if (config.mode == ChannelMode::csir) {
                    std::memcpy(frow + 2 * n, hr.row(b), n * sizeof(double));
                    std::memcpy(frow + 3 * n, hi.row(b), n * sizeof(double));
                }
            }
        }

        Matrix logits = sys.decoder.forward_logits(features, /*cache=*/update);
        double loss = softmax_cross_entropy_batch(logits, onehot, nullptr, update ? &dlogits : nullptr);
        if (!update) return loss;

        Matrix dfeat = sys.decoder.backward(dlogits);
        if (config.mode == ChannelMode::awgn) {
            dcode = dfeat;
        } else {
            for (std::size_t b = 0; b < B; ++b)
                channel_layer_backward({hr.row(b), n}, {hi.row(b), n}, {dfeat.row(b), n},
                                       {dfeat.row(b) + n, n}, {dcode.row(b), n});
        }
        sys.encoder.backward(dcode);
        adam_step(sys.encoder, enc_state);
        adam_step(sys.decoder, dec_state);
        return loss;
    };

    sys.loss_trace.reserve(std::size_t(std::max<std::int64_t>(config.steps, 0)));
    for (std::int64_t step = 0; step < config.steps; ++step) {
        try {
            sys.loss_trace.push_back(run_batch(true));
        } catch (const NumericDegeneracyError& e) {
            throw TrainingError(std::string("training aborted: ") + e.what(), step);
        }
        if (!std::isfinite(sys.loss_trace.back()))
            throw TrainingError("training aborted: non-finite loss", step);
    }

    if (sys.loss_trace.empty()) {
        sys.final_loss = run_batch(false);  // probe batch, no update
    } else {
        const std::size_t tail = std::min<std::size_t>(100, sys.loss_trace.size());
        sys.final_loss = std::accumulate(sys.loss_trace.end() - tail, sys.loss_trace.end(), 0.0) /
                         double(tail);
    }
    return sys;
}

// --- persistence -------------------------------------------------------------
//
// model file: magic "FCAE", u32 version, then the two length-prefixed
// network blobs; a human-readable key=value sidecar at <path>.meta carries
// the training configuration.

namespace {

constexpr char kModelMagic[4] = {'F', 'C', 'A', 'E'};
constexpr std::uint32_t kModelVersion = 1;

void append_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(std::uint8_t(v >> (8 * i)));
}

void append_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(std::uint8_t(v >> (8 * i)));
}

std::string join_sizes(const std::vector<std::size_t>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(v[i]);
    }
    return out;
}

std::vector<std::size_t> split_sizes(const std::string& s) {
    std::vector<std::size_t> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (!tok.empty()) out.push_back(std::size_t(std::stoull(tok)));
    }
    return out;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

void TrainedSystem::save(const std::filesystem::path& model_path) const {
    std::vector<std::uint8_t> blob;
    blob.insert(blob.end(), kModelMagic, kModelMagic + sizeof(kModelMagic));
    append_u32(blob, kModelVersion);
    auto enc = encoder.serialize();
    auto dec = decoder.serialize();
    append_u64(blob, enc.size());
    blob.insert(blob.end(), enc.begin(), enc.end());
    append_u64(blob, dec.size());
    blob.insert(blob.end(), dec.begin(), dec.end());

    std::ofstream out(model_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write model file: " + model_path.string());
    out.write(reinterpret_cast<const char*>(blob.data()), std::streamsize(blob.size()));
    out.close();

    std::ofstream meta(model_path.string() + ".meta");
    if (!meta) throw std::runtime_error("cannot write sidecar: " + model_path.string() + ".meta");
    meta << "[model]\n";
    meta << "mode = " << channel_mode_name(config.mode) << "\n";
    meta << "M = " << config.M << "\n";
    meta << "n = " << config.n << "\n";
    meta << "fading = " << fading_kind_name(config.fading.kind) << "\n";
    meta << "gamma_shape = " << format_double(config.fading.shape) << "\n";
    meta << "train_snr_db = " << format_double(config.train_snr_db) << "\n";
    meta << "steps = " << config.steps << "\n";
    meta << "batch_size = " << config.batch_size << "\n";
    meta << "lr = " << format_double(config.lr) << "\n";
    meta << "seed = " << config.seed << "\n";
    meta << "encoder_hidden = " << join_sizes(config.encoder_hidden) << "\n";
    meta << "decoder_hidden = " << join_sizes(config.decoder_hidden) << "\n";
    meta << "final_loss = " << format_double(final_loss) << "\n";
}

TrainedSystem TrainedSystem::load(const std::filesystem::path& model_path) {
    std::ifstream in(model_path, std::ios::binary);
    if (!in) throw FormatError("cannot open model file: " + model_path.string());
    std::vector<std::uint8_t> blob((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
    if (blob.size() < sizeof(kModelMagic) + 4 + 8 ||
        std::memcmp(blob.data(), kModelMagic, sizeof(kModelMagic)) != 0)
        throw FormatError("model file: bad magic");
    std::size_t pos = sizeof(kModelMagic);
    auto read_u32 = [&]() {
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= std::uint32_t(blob[pos + i]) << (8 * i);
        pos += 4;
        return v;
    };
    auto read_u64 = [&]() {
        if (pos + 8 > blob.size()) throw FormatError("model file truncated");
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= std::uint64_t(blob[pos + i]) << (8 * i);
        pos += 8;
        return v;
    };
    if (read_u32() != kModelVersion) throw FormatError("model file: unsupported version");

    TrainedSystem sys;
    std::uint64_t enc_len = read_u64();
    if (pos + enc_len > blob.size()) throw FormatError("model file truncated");
    sys.encoder = Network::deserialize({blob.data() + pos, enc_len});
    pos += enc_len;
    std::uint64_t dec_len = read_u64();
    if (pos + dec_len > blob.size()) throw FormatError("model file truncated");
    sys.decoder = Network::deserialize({blob.data() + pos, dec_len});
    pos += dec_len;
    if (pos != blob.size()) throw FormatError("model file: trailing bytes");

    const std::string meta_path = model_path.string() + ".meta";
    ConfigFile meta = ConfigFile::parse_file(meta_path);
    AutoencoderConfig cfg;
    cfg.mode = parse_channel_mode(meta.get("model", "mode", "no_csi"));
    cfg.M = std::size_t(meta.get_int("model", "M", 2));
    cfg.n = std::size_t(meta.get_int("model", "n", 2));
    const std::string fading_name = meta.get("model", "fading", "rayleigh");
    const double gamma_shape = meta.get_double("model", "gamma_shape", 2.0);
    cfg.fading = normalize_spec(parse_fading_kind(fading_name),
                                gamma_shape > 0.0 ? gamma_shape : 2.0);
    cfg.train_snr_db = meta.get_double("model", "train_snr_db", 7.0);
    cfg.steps = meta.get_int("model", "steps", 0);
    cfg.batch_size = std::size_t(meta.get_int("model", "batch_size", 256));
    cfg.lr = meta.get_double("model", "lr", 1e-3);
    cfg.seed = std::uint64_t(meta.get_int("model", "seed", 1));
    cfg.encoder_hidden = split_sizes(meta.get("model", "encoder_hidden", ""));
    cfg.decoder_hidden = split_sizes(meta.get("model", "decoder_hidden", ""));
    sys.config = cfg;
    sys.final_loss = meta.get_double("model", "final_loss", 0.0);

    if (sys.encoder.input_dim() != cfg.M || sys.encoder.output_dim() != cfg.n ||
        sys.decoder.input_dim() != cfg.decoder_input_dim() || sys.decoder.output_dim() != cfg.M)
        throw FormatError("model file: networks do not match sidecar metadata");
    return sys;
}

}  // namespace fadecode
