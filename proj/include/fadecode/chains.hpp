/*
Concrete end-to-end pipelines: the classical baselines and learned-system
evaluation chains.
*/

#ifndef FADECODE_CHAINS_HPP
#define FADECODE_CHAINS_HPP

#include <memory>
#include <string>

#include "fadecode/autoencoder.hpp"
#include "fadecode/evaluation.hpp"

namespace fadecode {

// uncoded orthogonal signaling over no-CSI Rayleigh, one bit per trial,
// uncoded N0, unit chips
class OrthClassicalChain : public Chain {
public:
    explicit OrthClassicalChain(FadingSpec spec = normalize_spec(FadingKind::rayleigh));
    std::string label() const override { return "orth_classical"; }
    TrialCounts run(double snr_db, Rng& rng, std::uint64_t trials) const override;

private:
    FadingSpec spec_;
};

// (7,4) Hamming + orthogonal signaling over no-CSI Rayleigh; 14 channel
// uses per block, coded N0 with R = 4/7. Scores the 4 data bits per trial
// (units = 4*trials), matching the published per-bit curve.
class HammingHardNoCsiChain : public Chain {
public:
    explicit HammingHardNoCsiChain(FadingSpec spec = normalize_spec(FadingKind::rayleigh));
    std::string label() const override { return "hamming_hard_nocsi"; }
    TrialCounts run(double snr_db, Rng& rng, std::uint64_t trials) const override;

private:
    FadingSpec spec_;
};

// uncoded coherent BPSK with CSIR, 4-bit blocks, uncoded N0
class UncodedCsirChain : public Chain {
public:
    explicit UncodedCsirChain(FadingSpec spec = normalize_spec(FadingKind::rayleigh));
    std::string label() const override { return "uncoded_csir"; }
    TrialCounts run(double snr_db, Rng& rng, std::uint64_t trials) const override;

private:
    FadingSpec spec_;
};

// (7,4) Hamming, per-symbol coherent combining + hard syndrome decoding
class HammingHardCsirChain : public Chain {
public:
    explicit HammingHardCsirChain(FadingSpec spec = normalize_spec(FadingKind::rayleigh));
    std::string label() const override { return "hamming_hard_csir"; }
    TrialCounts run(double snr_db, Rng& rng, std::uint64_t trials) const override;

private:
    FadingSpec spec_;
};

// (7,4) Hamming, soft maximum-likelihood decoding over the 16 codewords
class HammingMldCsirChain : public Chain {
public:
    explicit HammingMldCsirChain(FadingSpec spec = normalize_spec(FadingKind::rayleigh));
    std::string label() const override { return "hamming_mld_csir"; }
    TrialCounts run(double snr_db, Rng& rng, std::uint64_t trials) const override;

private:
    FadingSpec spec_;
};

// a trained system evaluated end to end at coded N0 (R = log2 M / n);
// decoder forwards are batched, randomness is still drawn in trial order
class LearnedChain : public Chain {
public:
    explicit LearnedChain(const TrainedSystem& system, std::string label = "learned");
    std::string label() const override { return label_; }
    TrialCounts run(double snr_db, Rng& rng, std::uint64_t trials) const override;

private:
    const TrainedSystem& system_;
    Matrix codebook_;
    std::string label_;
};

// an AWGN-trained system applied over a fading channel with CSIR through
// scaled matched-filter combining
class AwgnTransferChain : public Chain {
public:
    AwgnTransferChain(const TrainedSystem& awgn_system, FadingSpec spec,
                      std::string label = "learned_awgn_transfer");
    std::string label() const override { return label_; }
    TrialCounts run(double snr_db, Rng& rng, std::uint64_t trials) const override;

private:
    const TrainedSystem& system_;
    FadingSpec spec_;
    Matrix codebook_;
    std::string label_;
};

// baseline registry for the CLI: orth_classical, hamming_hard_nocsi,
// uncoded_csir, hamming_hard_csir, hamming_mld_csir
std::unique_ptr<Chain> make_baseline_chain(const std::string& name);
std::vector<std::string> baseline_names();

}  // namespace fadecode

#endif
