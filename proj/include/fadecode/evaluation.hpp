/*
Monte Carlo BLER estimation, SNR sweeps with per-point RNG streams, and
codebook Gram analysis.
*/

#ifndef FADECODE_EVALUATION_HPP
#define FADECODE_EVALUATION_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "fadecode/matrix.hpp"
#include "fadecode/rng.hpp"

namespace fadecode {

inline int indicator(std::size_t m, std::size_t m_hat) { return m == m_hat ? 0 : 1; }

// One end-to-end pipeline (classical or learned): message -> channel -> m_hat.
// run() consumes rng strictly in trial order so estimates are invariant to
// how trials are partitioned into calls. units lets chains that score
// several bits per trial report a per-bit rate (errors/units).
struct TrialCounts {
    std::uint64_t errors = 0;
    std::uint64_t units = 0;
};

class Chain {
public:
    virtual ~Chain() = default;
    virtual std::string label() const = 0;
    virtual TrialCounts run(double snr_db, Rng& rng, std::uint64_t trials) const = 0;
};

struct BlerPoint {
    double snr_db = 0.0;
    double bler = 0.0;
    std::uint64_t trials = 0;  // denominator (units)
    double stderr_ = 0.0;      // sqrt(bler*(1-bler)/trials)
};

struct BlerCurve {
    std::vector<BlerPoint> points;
    std::string system_label;
};

BlerPoint estimate_bler(const Chain& chain, double snr_db, std::uint64_t trials, Rng& rng);

struct SnrGrid {
    double lo_db = -2.0;
    double hi_db = 20.0;
    std::size_t count = 20;

    double at(std::size_t i) const;
    std::vector<double> values() const;
};

// Evaluates every grid point; points run concurrently, each on its own
// stream Rng(seed, stream_base + index), merged by index.
BlerCurve sweep(const Chain& chain, const SnrGrid& grid, std::uint64_t trials_per_point,
                std::uint64_t seed, std::uint64_t stream_base = 0);

std::string curve_to_csv(const BlerCurve& curve);
void write_csv(const std::string& path, const std::vector<BlerCurve>& curves);

// --- codebook structure -----------------------------------------------------

enum class OrthClass { orthogonal, non_orthogonal, indeterminate };

struct GramReport {
    Matrix gram;                          // M x M inner products
    std::vector<double> energies;         // diagonal
    double max_offdiag_normalized = 0.0;  // max_{i!=j} |<c_i,c_j>|/n
    OrthClass classification = OrthClass::indeterminate;
};

// thresholds: orthogonal below 0.05, non_orthogonal above 0.8
GramReport analyze_codebook(const Matrix& codebook);

std::string orth_class_name(OrthClass c);

// text table: one row per codeword, entries rounded to two decimals,
// signed zeros cleaned up
std::string render_codebook(const Matrix& codebook);

}  // namespace fadecode

#endif
