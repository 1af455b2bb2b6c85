/*
Fading coefficient distributions, variance-normalized so each of the real
and imaginary components has variance 1/2 (total complex variance 1).
*/

#ifndef FADECODE_FADING_HPP
#define FADECODE_FADING_HPP

#include <complex>
#include <string>

#include "fadecode/rng.hpp"

namespace fadecode {

enum class FadingKind {
    rayleigh,       // components N(0, 1/2)
    custom,         // difference of two Exponential(lambda) variates
    gamma,          // Gamma(k, theta), support R+
    gumbel,         // minimum-Gumbel(mu, beta)
    folded_normal,  // |N(mu, sigma^2)|, support R+
    degenerate,     // h = 1 exactly; test hook, not serializable
};

struct FadingSpec {
    FadingKind kind = FadingKind::rayleigh;
    double sigma = 0.0;   // rayleigh component std; folded_normal pre-fold std
    double lambda = 0.0;  // custom
    double shape = 0.0;   // gamma k
    double scale = 0.0;   // gamma theta
    double mu = 0.0;      // gumbel / folded_normal location
    double beta = 0.0;    // gumbel scale
    double per_component_variance = 0.5;
};

// Builds a spec whose per-component variance is exactly 1/2, solved
// analytically per family. gamma_shape is the one free knob (k > 0);
// throws std::invalid_argument for non-positive shape.
FadingSpec normalize_spec(FadingKind kind, double gamma_shape = 2.0);

// h = 1 + 0j always; used by tests and the noiseless-channel hook
FadingSpec degenerate_spec();

// one real fading component drawn from the configured family
double sample_fading_component(Rng& rng, const FadingSpec& spec);

// h = h_r + j*h_i with components i.i.d. per spec
std::complex<double> sample_fading(Rng& rng, const FadingSpec& spec);

// closed-form density of one component; 0 for x < 0 on R+-support kinds
double pdf(const FadingSpec& spec, double x);

// true if samples are always >= 0 (gamma, folded_normal)
bool nonnegative_support(FadingKind kind);

// serialized names: "rayleigh", "custom", "gamma", "gumbel", "folded_normal"
std::string fading_kind_name(FadingKind kind);
// throws std::invalid_argument on unknown names (degenerate has no name)
FadingKind parse_fading_kind(const std::string& name);

}  // namespace fadecode

#endif
