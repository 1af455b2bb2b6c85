/*
Minimal feedforward engine: dense layers, ReLU, an energy-normalizing
output layer, softmax cross-entropy, Adam, and a versioned binary
serialization format (magic "FCNET", little-endian 64-bit floats).
*/

#ifndef FADECODE_NETWORK_HPP
#define FADECODE_NETWORK_HPP

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "fadecode/matrix.hpp"
#include "fadecode/rng.hpp"

namespace fadecode {

// raised when EnergyNormalize sees an input of vanishing norm
struct NumericDegeneracyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// raised by deserialize on bad magic / version / truncation
struct FormatError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class LayerKind : std::uint8_t { dense = 0, relu = 1, energy_normalize = 2, softmax = 3 };

struct Layer {
    LayerKind kind;
    // dense: W is [out x in], b is [out]
    Matrix W;
    std::vector<double> b;
    Matrix dW;
    std::vector<double> db;
    // energy_normalize: output energy target ||c||^2 = n
    double target_energy = 0.0;

    // training caches; mutable so cache-free inference stays const
    mutable Matrix in_cache;
    mutable std::vector<double> norm_cache;  // per-row input norms (energy_normalize)
};

class Network {
public:
    void add_dense(std::size_t in, std::size_t out);
    void add_relu();
    void add_energy_normalize(double target_energy);
    void add_softmax();

    std::size_t input_dim() const { return input_dim_; }
    std::size_t output_dim() const { return output_dim_; }
    std::size_t parameter_count() const;
    bool ends_with_softmax() const;

    // He-scaled normal for ReLU-fed dense layers, 1/sqrt(fan_in) otherwise
    void init_weights(Rng& rng);

    // forward through every layer; cache=true keeps what backward needs.
    // With cache=false nothing is written, so const inference is safe to
    // share across threads.
    Matrix forward(const Matrix& x, bool cache = false) const;
    // forward stopping before a trailing softmax (training path)
    Matrix forward_logits(const Matrix& x, bool cache = false) const;

    // backward from d(loss)/d(logits); fills layer grads, returns d(loss)/d(input).
    // Grad accumulators are overwritten each call.
    Matrix backward(const Matrix& dy);

    void zero_grads();

    std::vector<Layer>& layers() { return layers_; }
    const std::vector<Layer>& layers() const { return layers_; }

    std::vector<std::uint8_t> serialize() const;
    static Network deserialize(std::span<const std::uint8_t> bytes);

private:
    std::vector<Layer> layers_;
    std::size_t input_dim_ = 0;
    std::size_t output_dim_ = 0;
};

// single-sample dense helpers (convenient for tests; the batched
// layer path is what training uses)
std::vector<double> dense_forward(const Matrix& W, std::span<const double> b,
                                  std::span<const double> x);

// energy normalization of one vector: c = sqrt(n) * z / ||z||
std::vector<double> energy_normalize_forward(std::span<const double> z, double target_energy);

struct SoftmaxResult {
    double loss = 0.0;
    std::vector<double> probabilities;
    std::vector<double> dlogits;
};

// numerically stabilized softmax + cross-entropy for one row;
// onehot must contain exactly one 1
SoftmaxResult softmax_cross_entropy(std::span<const double> logits, std::span<const double> onehot);

// batched: loss averaged over rows, dlogits = (p - onehot)/rows
double softmax_cross_entropy_batch(const Matrix& logits, const Matrix& onehot, Matrix* probs,
                                   Matrix* dlogits);

struct AdamState {
    double lr = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    std::int64_t step = 0;
    std::vector<std::vector<double>> m;  // one block per dense tensor (W then b)
    std::vector<std::vector<double>> v;

    explicit AdamState(double learning_rate = 1e-3) : lr(learning_rate) {}
};

// one bias-corrected Adam step over every dense layer of the network
void adam_step(Network& net, AdamState& state);

}  // namespace fadecode

#endif
