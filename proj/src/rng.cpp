#include "fadecode/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace fadecode {

namespace {

inline std::uint64_t splitmix64(std::uint64_t& z) {
    z += 0x9e3779b97f4a7c15ULL;
    std::uint64_t x = z;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

Rng::Rng(std::uint64_t seed, std::uint64_t stream_id) : seed_(seed), stream_id_(stream_id) {
    // fold the stream id into the splitmix chain so distinct streams start
    // from unrelated xoshiro states
    std::uint64_t z = seed ^ (stream_id * 0x9e3779b97f4a7c15ULL + 0x6a09e667f3bcc909ULL);
    for (auto& w : s_) w = splitmix64(z);
    if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 0x1ULL;  // xoshiro forbids all-zero
}

std::uint64_t Rng::next_u64() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
}

double Rng::uniform() { return double(next_u64() >> 11) * 0x1.0p-53; }

double Rng::uniform_open01() {
    // (0,1): 53-bit mantissa shifted to the cell midpoint
    return (double(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

std::uint64_t Rng::uniform_below(std::uint64_t bound) {
    // unbiased rejection from the top of the 64-bit range
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
        std::uint64_t r = next_u64();
        if (r >= threshold) return r % bound;
    }
}

double Rng::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    // Marsaglia polar: exact, and trig-free
    for (;;) {
        double u = 2.0 * uniform() - 1.0;
        double v = 2.0 * uniform() - 1.0;
        double s = u * u + v * v;
        if (s >= 1.0 || s == 0.0) continue;
        double factor = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * factor;
        has_spare_ = true;
        return u * factor;
    }
}

std::complex<double> sample_cscn(Rng& rng, double total_variance) {
    if (total_variance < 0.0) throw std::invalid_argument("sample_cscn: negative variance");
    if (total_variance == 0.0) return {0.0, 0.0};
    const double s = std::sqrt(total_variance / 2.0);
    const double re = s * rng.normal();
    const double im = s * rng.normal();
    return {re, im};
}

}  // namespace fadecode
