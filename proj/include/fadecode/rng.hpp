/*
Deterministic seeded random streams and exact normal sampling.
*/

#ifndef FADECODE_RNG_HPP
#define FADECODE_RNG_HPP

#include <complex>
#include <cstdint>

namespace fadecode {

// xoshiro256++ seeded through splitmix64. A (seed, stream_id) pair fully
// determines the sample sequence; distinct stream_ids give statistically
// independent streams usable from concurrent workers.
class Rng {
public:
    Rng() : Rng(0, 0) {}
    Rng(std::uint64_t seed, std::uint64_t stream_id);

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream_id() const { return stream_id_; }

    std::uint64_t next_u64();

    // uniform in [0,1) with 53-bit resolution
    double uniform();
    // uniform in (0,1), safe as log/ln(-ln .) input
    double uniform_open01();
    // uniform integer in [0, bound), bound >= 1; unbiased via rejection
    std::uint64_t uniform_below(std::uint64_t bound);

    // exact standard normal (Marsaglia polar method, no CLT approximation)
    double normal();

private:
    std::uint64_t s_[4];
    std::uint64_t seed_ = 0;
    std::uint64_t stream_id_ = 0;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

// circularly symmetric complex normal with E|w|^2 = total_variance
// (real and imaginary parts i.i.d. N(0, total_variance/2));
// throws std::invalid_argument for negative variance
std::complex<double> sample_cscn(Rng& rng, double total_variance);

inline double sample_standard_normal(Rng& rng) { return rng.normal(); }

}  // namespace fadecode

#endif
