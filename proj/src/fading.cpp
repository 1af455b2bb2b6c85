#include "fadecode/fading.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace fadecode {

namespace {

constexpr double kPi = std::numbers::pi;

// Marsaglia-Tsang squeeze-rejection sampler, exact for shape >= 1;
// shapes below 1 are boosted by U^(1/k)
double sample_gamma(Rng& rng, double shape, double scale) {
    double boost = 1.0;
    double k = shape;
    if (k < 1.0) {
        boost = std::pow(rng.uniform_open01(), 1.0 / k);
        k += 1.0;
    }
    const double d = k - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x = rng.normal();
        double t = 1.0 + c * x;
        if (t <= 0.0) continue;
        double v = t * t * t;
        double u = rng.uniform_open01();
        double x2 = x * x;
        if (u < 1.0 - 0.0331 * x2 * x2) return boost * d * v * scale;
        if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return boost * d * v * scale;
    }
}

}  // namespace

FadingSpec normalize_spec(FadingKind kind, double gamma_shape) {
    FadingSpec spec;
    spec.kind = kind;
    spec.per_component_variance = 0.5;
    switch (kind) {
        case FadingKind::rayleigh:
            spec.sigma = std::sqrt(0.5);
            break;
        case FadingKind::custom:
            // X = Y - Z, Y,Z ~ Exp(lambda): Var = 2/lambda^2 = 1/2
            spec.lambda = 2.0;
            break;
        case FadingKind::gamma:
            if (gamma_shape <= 0.0)
                throw std::invalid_argument("normalize_spec: gamma shape must be positive");
            // Var = k*theta^2 = 1/2
            spec.shape = gamma_shape;
            spec.scale = std::sqrt(0.5 / gamma_shape);
            break;
        case FadingKind::gumbel:
            // Var = pi^2 beta^2 / 6 = 1/2
            spec.mu = 0.0;
            spec.beta = std::sqrt(3.0) / kPi;
            break;
        case FadingKind::folded_normal:
            // half-normal: Var = sigma^2 (1 - 2/pi) = 1/2
            spec.mu = 0.0;
            spec.sigma = std::sqrt(0.5 / (1.0 - 2.0 / kPi));
            break;
        case FadingKind::degenerate:
            throw std::invalid_argument("normalize_spec: degenerate kind is a test hook");
    }
    return spec;
}

FadingSpec degenerate_spec() {
    FadingSpec spec;
    spec.kind = FadingKind::degenerate;
    spec.per_component_variance = 0.0;
    return spec;
}

double sample_fading_component(Rng& rng, const FadingSpec& spec) {
    switch (spec.kind) {
        case FadingKind::rayleigh:
            return spec.sigma * rng.normal();
        case FadingKind::custom: {
            double y = -std::log(rng.uniform_open01()) / spec.lambda;
            double z = -std::log(rng.uniform_open01()) / spec.lambda;
            return y - z;
        }
        case FadingKind::gamma:
            return sample_gamma(rng, spec.shape, spec.scale);
        case FadingKind::gumbel:
            // inverse CDF of the minimum-Gumbel convention
            return spec.mu + spec.beta * std::log(-std::log(1.0 - rng.uniform_open01()));
        case FadingKind::folded_normal:
            return std::abs(spec.mu + spec.sigma * rng.normal());
        case FadingKind::degenerate:
            return 1.0;
    }
    return 0.0;
}

std::complex<double> sample_fading(Rng& rng, const FadingSpec& spec) {
    if (spec.kind == FadingKind::degenerate) return {1.0, 0.0};
    const double hr = sample_fading_component(rng, spec);
    const double hi = sample_fading_component(rng, spec);
    return {hr, hi};
}

double pdf(const FadingSpec& spec, double x) {
    switch (spec.kind) {
        case FadingKind::rayleigh: {
            const double s2 = spec.sigma * spec.sigma;
            return std::exp(-x * x / (2.0 * s2)) / std::sqrt(2.0 * kPi * s2);
        }
        case FadingKind::custom:
            return 0.5 * spec.lambda * std::exp(-spec.lambda * std::abs(x));
        case FadingKind::gamma: {
            if (x < 0.0) return 0.0;
            if (x == 0.0) {
                if (spec.shape > 1.0) return 0.0;
                if (spec.shape == 1.0) return 1.0 / spec.scale;
                return std::numeric_limits<double>::infinity();
            }
            return std::exp((spec.shape - 1.0) * std::log(x) - x / spec.scale -
                            spec.shape * std::log(spec.scale) - std::lgamma(spec.shape));
        }
        case FadingKind::gumbel: {
            const double z = (x - spec.mu) / spec.beta;
            return std::exp(z - std::exp(z)) / spec.beta;
        }
        case FadingKind::folded_normal: {
            if (x < 0.0) return 0.0;
            const double s2 = spec.sigma * spec.sigma;
            const double a = std::exp(-(x - spec.mu) * (x - spec.mu) / (2.0 * s2));
            const double b = std::exp(-(x + spec.mu) * (x + spec.mu) / (2.0 * s2));
            return (a + b) / std::sqrt(2.0 * kPi * s2);
        }
        case FadingKind::degenerate:
            return 0.0;
    }
    return 0.0;
}

bool nonnegative_support(FadingKind kind) {
    return kind == FadingKind::gamma || kind == FadingKind::folded_normal;
}

std::string fading_kind_name(FadingKind kind) {
    switch (kind) {
        case FadingKind::rayleigh: return "rayleigh";
        case FadingKind::custom: return "custom";
        case FadingKind::gamma: return "gamma";
        case FadingKind::gumbel: return "gumbel";
        case FadingKind::folded_normal: return "folded_normal";
        case FadingKind::degenerate: return "degenerate";
    }
    return "?";
}

FadingKind parse_fading_kind(const std::string& name) {
    if (name == "rayleigh") return FadingKind::rayleigh;
    if (name == "custom") return FadingKind::custom;
    if (name == "gamma") return FadingKind::gamma;
    if (name == "gumbel") return FadingKind::gumbel;
    if (name == "folded_normal") return FadingKind::folded_normal;
    throw std::invalid_argument("unknown fading kind: " + name);
}

}  // namespace fadecode
