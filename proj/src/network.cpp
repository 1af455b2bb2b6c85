#include "fadecode/network.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>

#include "fadecode/kernels.hpp"

namespace fadecode {

namespace {

constexpr char kMagic[5] = {'F', 'C', 'N', 'E', 'T'};
constexpr std::uint32_t kVersion = 1;
constexpr double kNormFloor = 1e-12;

void append_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(std::uint8_t(v >> (8 * i)));
}

void append_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(std::uint8_t(v >> (8 * i)));
}

void append_f64(std::vector<std::uint8_t>& out, double d) {
    append_u64(out, std::bit_cast<std::uint64_t>(d));
}

struct Reader {
    std::span<const std::uint8_t> bytes;
    std::size_t pos = 0;

    void need(std::size_t n) const {
        if (pos + n > bytes.size()) throw FormatError("network blob truncated");
    }
    std::uint8_t u8() {
        need(1);
        return bytes[pos++];
    }
    std::uint32_t u32() {
        need(4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= std::uint32_t(bytes[pos + i]) << (8 * i);
        pos += 4;
        return v;
    }
    std::uint64_t u64() {
        need(8);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= std::uint64_t(bytes[pos + i]) << (8 * i);
        pos += 8;
        return v;
    }
    double f64() { return std::bit_cast<double>(u64()); }
};

}  // namespace

void Network::add_dense(std::size_t in, std::size_t out) {
    if (!layers_.empty() && output_dim_ != in)
        throw std::invalid_argument("add_dense: dimension mismatch");
    Layer layer;
    layer.kind = LayerKind::dense;
    layer.W = Matrix(out, in);
    layer.b.assign(out, 0.0);
    layer.dW = Matrix(out, in);
    layer.db.assign(out, 0.0);
    layers_.push_back(std::move(layer));
    if (layers_.size() == 1) input_dim_ = in;
    output_dim_ = out;
}

void Network::add_relu() {
    Layer layer;
    layer.kind = LayerKind::relu;
    layers_.push_back(std::move(layer));
}

void Network::add_energy_normalize(double target_energy) {
    Layer layer;
    layer.kind = LayerKind::energy_normalize;
    layer.target_energy = target_energy;
    layers_.push_back(std::move(layer));
}

void Network::add_softmax() {
    Layer layer;
    layer.kind = LayerKind::softmax;
    layers_.push_back(std::move(layer));
}

std::size_t Network::parameter_count() const {
    std::size_t total = 0;
    for (const auto& layer : layers_)
        if (layer.kind == LayerKind::dense) total += layer.W.size() + layer.b.size();
    return total;
}

bool Network::ends_with_softmax() const {
    return !layers_.empty() && layers_.back().kind == LayerKind::softmax;
}

void Network::init_weights(Rng& rng) {
    for (std::size_t li = 0; li < layers_.size(); ++li) {
        Layer& layer = layers_[li];
        if (layer.kind != LayerKind::dense) continue;
        bool relu_next = li + 1 < layers_.size() && layers_[li + 1].kind == LayerKind::relu;
        double fan_in = double(layer.W.cols);
        double std_dev = std::sqrt((relu_next ? 2.0 : 1.0) / fan_in);
        for (auto& w : layer.W.data) w = std_dev * rng.normal();
        std::fill(layer.b.begin(), layer.b.end(), 0.0);
    }
}

namespace {

Matrix dense_layer_forward(const Layer& layer, const Matrix& x, bool cache) {
    Matrix y(x.rows, layer.W.rows);
    for (std::size_t r = 0; r < x.rows; ++r) {
        const double* xr = x.row(r);
        double* yr = y.row(r);
        for (std::size_t o = 0; o < layer.W.rows; ++o)
            yr[o] = kernels::dot(layer.W.row(o), xr, layer.W.cols) + layer.b[o];
    }
    if (cache) layer.in_cache = x;
    return y;
}

Matrix relu_layer_forward(const Layer& layer, const Matrix& x, bool cache) {
    Matrix y(x.rows, x.cols);
    kernels::relu(y.data.data(), x.data.data(), x.size());
    if (cache) layer.in_cache = x;
    return y;
}

Matrix energy_layer_forward(const Layer& layer, const Matrix& x, bool cache) {
    Matrix y(x.rows, x.cols);
    if (cache) layer.norm_cache.assign(x.rows, 0.0);
    const double root_energy = std::sqrt(layer.target_energy);
    for (std::size_t r = 0; r < x.rows; ++r) {
        const double* xr = x.row(r);
        double norm = std::sqrt(kernels::dot(xr, xr, x.cols));
        if (norm < kNormFloor)
            throw NumericDegeneracyError("energy_normalize: input norm below 1e-12");
        double s = root_energy / norm;
        double* yr = y.row(r);
        for (std::size_t c = 0; c < x.cols; ++c) yr[c] = s * xr[c];
        if (cache) layer.norm_cache[r] = norm;
    }
    if (cache) layer.in_cache = x;
    return y;
}

Matrix softmax_layer_forward(const Matrix& x) {
    Matrix y(x.rows, x.cols);
    for (std::size_t r = 0; r < x.rows; ++r) {
        const double* xr = x.row(r);
        double* yr = y.row(r);
        double mx = xr[0];
        for (std::size_t c = 1; c < x.cols; ++c) mx = std::max(mx, xr[c]);
        double sum = 0.0;
        for (std::size_t c = 0; c < x.cols; ++c) {
            yr[c] = std::exp(xr[c] - mx);
            sum += yr[c];
        }
        for (std::size_t c = 0; c < x.cols; ++c) yr[c] /= sum;
    }
    return y;
}

}  // namespace

Matrix Network::forward(const Matrix& x, bool cache) const {
    if (x.cols != input_dim_) throw std::invalid_argument("forward: input dimension mismatch");
    Matrix cur = x;
    for (const auto& layer : layers_) {
        switch (layer.kind) {
            case LayerKind::dense: cur = dense_layer_forward(layer, cur, cache); break;
            case LayerKind::relu: cur = relu_layer_forward(layer, cur, cache); break;
            case LayerKind::energy_normalize: cur = energy_layer_forward(layer, cur, cache); break;
            case LayerKind::softmax: cur = softmax_layer_forward(cur); break;
        }
    }
    return cur;
}

Matrix Network::forward_logits(const Matrix& x, bool cache) const {
    if (x.cols != input_dim_) throw std::invalid_argument("forward_logits: dimension mismatch");
    Matrix cur = x;
    std::size_t count = layers_.size();
    if (ends_with_softmax()) --count;
    for (std::size_t li = 0; li < count; ++li) {
        const Layer& layer = layers_[li];
        switch (layer.kind) {
            case LayerKind::dense: cur = dense_layer_forward(layer, cur, cache); break;
            case LayerKind::relu: cur = relu_layer_forward(layer, cur, cache); break;
            case LayerKind::energy_normalize: cur = energy_layer_forward(layer, cur, cache); break;
            case LayerKind::softmax: break;
        }
    }
    return cur;
}

Matrix Network::backward(const Matrix& dy) {
    Matrix cur = dy;
    std::size_t start = layers_.size();
    if (ends_with_softmax()) --start;  // gradients arrive w.r.t. logits
    for (std::size_t idx = start; idx-- > 0;) {
        Layer& layer = layers_[idx];
        switch (layer.kind) {
            case LayerKind::dense: {
                const Matrix& x = layer.in_cache;
                layer.dW.fill(0.0);
                std::fill(layer.db.begin(), layer.db.end(), 0.0);
                Matrix dx(x.rows, x.cols);
                for (std::size_t r = 0; r < x.rows; ++r) {
                    const double* dyr = cur.row(r);
                    kernels::add(layer.db.data(), dyr, layer.b.size());
                    for (std::size_t o = 0; o < layer.W.rows; ++o) {
                        kernels::axpy(layer.dW.row(o), dyr[o], x.row(r), layer.W.cols);
                        kernels::axpy(dx.row(r), dyr[o], layer.W.row(o), layer.W.cols);
                    }
                }
                cur = std::move(dx);
                break;
            }
            case LayerKind::relu: {
                const Matrix& x = layer.in_cache;
                Matrix dx(x.rows, x.cols);
                kernels::relu_backward(dx.data.data(), x.data.data(), cur.data.data(), x.size());
                cur = std::move(dx);
                break;
            }
            case LayerKind::energy_normalize: {
                const Matrix& x = layer.in_cache;
                Matrix dx(x.rows, x.cols);
                const double root_energy = std::sqrt(layer.target_energy);
                for (std::size_t r = 0; r < x.rows; ++r) {
                    const double* xr = x.row(r);
                    const double* dcr = cur.row(r);
                    double* dxr = dx.row(r);
                    double norm = layer.norm_cache[r];
                    double s = root_energy / norm;
                    double proj = kernels::dot(xr, dcr, x.cols) / (norm * norm);
                    for (std::size_t c = 0; c < x.cols; ++c) dxr[c] = s * (dcr[c] - xr[c] * proj);
                }
                cur = std::move(dx);
                break;
            }
            case LayerKind::softmax:
                throw std::logic_error("backward through interior softmax is not supported");
        }
    }
    return cur;
}

void Network::zero_grads() {
    for (auto& layer : layers_) {
        if (layer.kind != LayerKind::dense) continue;
        layer.dW.fill(0.0);
        std::fill(layer.db.begin(), layer.db.end(), 0.0);
    }
}

std::vector<double> dense_forward(const Matrix& W, std::span<const double> b,
                                  std::span<const double> x) {
    if (x.size() != W.cols || b.size() != W.rows)
        throw std::invalid_argument("dense_forward: shape mismatch");
    std::vector<double> y(W.rows);
    for (std::size_t o = 0; o < W.rows; ++o) y[o] = kernels::dot(W.row(o), x.data(), W.cols) + b[o];
    return y;
}

std::vector<double> energy_normalize_forward(std::span<const double> z, double target_energy) {
    double norm = std::sqrt(kernels::dot(z.data(), z.data(), z.size()));
    if (norm < kNormFloor) throw NumericDegeneracyError("energy_normalize: input norm below 1e-12");
    double s = std::sqrt(target_energy) / norm;
    std::vector<double> c(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) c[i] = s * z[i];
    return c;
}

SoftmaxResult softmax_cross_entropy(std::span<const double> logits,
                                    std::span<const double> onehot) {
    SoftmaxResult res;
    const std::size_t n = logits.size();
    res.probabilities.resize(n);
    res.dlogits.resize(n);
    double mx = logits[0];
    for (std::size_t i = 1; i < n; ++i) mx = std::max(mx, logits[i]);
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        res.probabilities[i] = std::exp(logits[i] - mx);
        sum += res.probabilities[i];
    }
    double loss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        res.probabilities[i] /= sum;
        res.dlogits[i] = res.probabilities[i] - onehot[i];
        if (onehot[i] == 1.0) loss = -std::log(res.probabilities[i]);
    }
    res.loss = loss;
    return res;
}

double softmax_cross_entropy_batch(const Matrix& logits, const Matrix& onehot, Matrix* probs,
                                   Matrix* dlogits) {
    double total = 0.0;
    if (probs) *probs = Matrix(logits.rows, logits.cols);
    if (dlogits) *dlogits = Matrix(logits.rows, logits.cols);
    const double inv_rows = 1.0 / double(logits.rows);
    for (std::size_t r = 0; r < logits.rows; ++r) {
        auto res = softmax_cross_entropy({logits.row(r), logits.cols}, {onehot.row(r), onehot.cols});
        total += res.loss;
        for (std::size_t c = 0; c < logits.cols; ++c) {
            if (probs) (*probs)(r, c) = res.probabilities[c];
            if (dlogits) (*dlogits)(r, c) = res.dlogits[c] * inv_rows;
        }
    }
    return total * inv_rows;
}

void adam_step(Network& net, AdamState& state) {
    // lazily size the moment blocks on first use
    std::size_t tensors = 0;
    for (const auto& layer : net.layers())
        if (layer.kind == LayerKind::dense) tensors += 2;
    if (state.m.size() != tensors) {
        state.m.assign(tensors, {});
        state.v.assign(tensors, {});
        std::size_t t = 0;
        for (const auto& layer : net.layers()) {
            if (layer.kind != LayerKind::dense) continue;
            state.m[t].assign(layer.W.size(), 0.0);
            state.v[t].assign(layer.W.size(), 0.0);
            ++t;
            state.m[t].assign(layer.b.size(), 0.0);
            state.v[t].assign(layer.b.size(), 0.0);
            ++t;
        }
    }
    state.step += 1;
    const double c1 = 1.0 / (1.0 - std::pow(state.beta1, double(state.step)));
    const double c2 = 1.0 / (1.0 - std::pow(state.beta2, double(state.step)));
    std::size_t t = 0;
    for (auto& layer : net.layers()) {
        if (layer.kind != LayerKind::dense) continue;
        kernels::adam_update(layer.W.data.data(), state.m[t].data(), state.v[t].data(),
                             layer.dW.data.data(), layer.W.size(), state.lr, state.beta1,
                             state.beta2, state.eps, c1, c2);
        ++t;
        kernels::adam_update(layer.b.data(), state.m[t].data(), state.v[t].data(), layer.db.data(),
                             layer.b.size(), state.lr, state.beta1, state.beta2, state.eps, c1, c2);
        ++t;
    }
}

std::vector<std::uint8_t> Network::serialize() const {
    std::vector<std::uint8_t> out;
    out.insert(out.end(), kMagic, kMagic + sizeof(kMagic));
    append_u32(out, kVersion);
    append_u32(out, std::uint32_t(layers_.size()));
    for (const auto& layer : layers_) {
        out.push_back(std::uint8_t(layer.kind));
        if (layer.kind == LayerKind::dense) {
            append_u64(out, layer.W.rows);
            append_u64(out, layer.W.cols);
            for (double w : layer.W.data) append_f64(out, w);
            for (double b : layer.b) append_f64(out, b);
        } else if (layer.kind == LayerKind::energy_normalize) {
            append_f64(out, layer.target_energy);
        }
    }
    return out;
}

Network Network::deserialize(std::span<const std::uint8_t> bytes) {
    Reader rd{bytes};
    rd.need(sizeof(kMagic));
    if (std::memcmp(bytes.data(), kMagic, sizeof(kMagic)) != 0)
        throw FormatError("network blob: bad magic");
    rd.pos = sizeof(kMagic);
    std::uint32_t version = rd.u32();
    if (version != kVersion) throw FormatError("network blob: unsupported version");
    std::uint32_t count = rd.u32();
    Network net;
    for (std::uint32_t li = 0; li < count; ++li) {
        std::uint8_t kind = rd.u8();
        switch (LayerKind(kind)) {
            case LayerKind::dense: {
                std::uint64_t rows = rd.u64();
                std::uint64_t cols = rd.u64();
                if (rows == 0 || cols == 0 || rows > (1u << 20) || cols > (1u << 20))
                    throw FormatError("network blob: implausible dense shape");
                try {
                    net.add_dense(cols, rows);
                } catch (const std::invalid_argument&) {
                    throw FormatError("network blob: layer dimensions do not chain");
                }
                Layer& layer = net.layers_.back();
                for (auto& w : layer.W.data) w = rd.f64();
                for (auto& b : layer.b) b = rd.f64();
                break;
            }
            case LayerKind::relu: net.add_relu(); break;
            case LayerKind::energy_normalize: net.add_energy_normalize(rd.f64()); break;
            case LayerKind::softmax: net.add_softmax(); break;
            default: throw FormatError("network blob: unknown layer kind");
        }
    }
    if (rd.pos != bytes.size()) throw FormatError("network blob: trailing bytes");
    return net;
}

}  // namespace fadecode
