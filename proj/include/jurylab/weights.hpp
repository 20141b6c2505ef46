#pragma once

// Weight schemes for the weighted majority rule, and the truncated-Gaussian
// machinery behind stochastic epistemic weights.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <variant>

#include "error.hpp"
#include "measure.hpp"
#include "normal.hpp"
#include "quadrature.hpp"
#include "rng.hpp"

namespace jurylab {

/// Where the weight noise eps | p is truncated.
enum class NoiseBounds {
    weight_range,  // a = 1 - w_d(p), b = W - w_d(p): keeps w in [1, W] for every k
    proportional,  // a = -(W-1)p, b = (W-1)(1-p): agrees with weight_range only at k = 1
};

namespace scheme {

struct Unit {};
/// w = 1 if p >= threshold else 0.
struct Expert {
    double threshold = 0.75;
};
/// w = log(p / (1-p)) with p clamped to [clamp, 1 - clamp].
struct LogOdds {
    double clamp = 1e-6;
};
/// w_d(p) = 1 + (W-1) p^k.
struct BoundedPoly {
    double max_weight;
    int k;
};
/// w = w_d(p) + eps, eps | p ~ N(0, sigma^2) truncated to the NoiseBounds interval.
struct Stochastic {
    double max_weight;
    int k;
    double sigma;
    NoiseBounds bounds = NoiseBounds::weight_range;

    /// x = (W - 1) / sigma.
    double noise_ratio() const { return (max_weight - 1.0) / sigma; }
};

}  // namespace scheme

using WeightScheme = std::variant<scheme::Unit, scheme::Expert, scheme::LogOdds, scheme::BoundedPoly, scheme::Stochastic>;

inline void validate(const WeightScheme& ws) {
    struct Visitor {
        void operator()(const scheme::Unit&) const {}
        void operator()(const scheme::Expert& s) const {
            require(s.threshold > 0.5 && s.threshold <= 1.0, "expert: threshold must lie in (1/2, 1]");
        }
        void operator()(const scheme::LogOdds& s) const {
            require(s.clamp > 0.0 && s.clamp < 0.5, "log_odds: clamp must lie in (0, 1/2)");
        }
        void operator()(const scheme::BoundedPoly& s) const {
            require(s.max_weight > 1.0, "bounded_poly: W must be > 1");
            require(s.k >= 1, "bounded_poly: k must be >= 1");
        }
        void operator()(const scheme::Stochastic& s) const {
            require(s.max_weight > 1.0, "stochastic: W must be > 1");
            require(s.k >= 1, "stochastic: k must be >= 1");
            require(s.sigma > 0.0, "stochastic: sigma must be > 0");
        }
    };
    std::visit(Visitor{}, ws);
}

inline std::string describe(const WeightScheme& ws) {
    struct Visitor {
        std::string operator()(const scheme::Unit&) const { return "unit"; }
        std::string operator()(const scheme::Expert& s) const { return "expert(" + std::to_string(s.threshold) + ")"; }
        std::string operator()(const scheme::LogOdds&) const { return "log_odds"; }
        std::string operator()(const scheme::BoundedPoly& s) const {
            return "bounded_poly(W=" + std::to_string(s.max_weight) + ",k=" + std::to_string(s.k) + ")";
        }
        std::string operator()(const scheme::Stochastic& s) const {
            return "stochastic(W=" + std::to_string(s.max_weight) + ",k=" + std::to_string(s.k) +
                   ",sigma=" + std::to_string(s.sigma) + ")";
        }
    };
    return std::visit(Visitor{}, ws);
}

inline bool is_stochastic(const WeightScheme& ws) { return std::holds_alternative<scheme::Stochastic>(ws); }
inline bool is_unit(const WeightScheme& ws) { return std::holds_alternative<scheme::Unit>(ws); }

inline double polynomial_weight(double max_weight, int k, double p) { return 1.0 + (max_weight - 1.0) * std::pow(p, k); }

inline double deterministic_weight(const WeightScheme& ws, double p) {
    require(p >= 0.0 && p <= 1.0, "deterministic_weight: p must lie in [0,1]");
    struct Visitor {
        double p;
        double operator()(const scheme::Unit&) const { return 1.0; }
        double operator()(const scheme::Expert& s) const { return p >= s.threshold ? 1.0 : 0.0; }
        double operator()(const scheme::LogOdds& s) const {
            const double c = std::clamp(p, s.clamp, 1.0 - s.clamp);
            return std::log(c / (1.0 - c));
        }
        double operator()(const scheme::BoundedPoly& s) const { return polynomial_weight(s.max_weight, s.k, p); }
        double operator()(const scheme::Stochastic& s) const { return polynomial_weight(s.max_weight, s.k, p); }
    };
    return std::visit(Visitor{p}, ws);
}

// ---------------------------------------------------------------------------
// Truncated Gaussian N(0, sigma^2) restricted to (lower, upper).

struct TruncatedGaussianSpec {
    double sigma;
    double lower;
    double upper;
};

namespace detail {

/// E[Z | alpha < Z < beta] for standard normal Z, stable for far tails.
inline double standard_truncated_mean(double alpha, double beta) {
    if (beta <= 0.0) return -standard_truncated_mean(-beta, -alpha);
    if (alpha < 0.0) {
        // straddles 0: erf differences add, no cancellation
        const double mass = 0.5 * (std::erf(beta * normal::inv_sqrt2) - std::erf(alpha * normal::inv_sqrt2));
        double diff;  // phi(alpha) - phi(beta)
        if (std::isinf(beta))
            diff = normal::pdf(alpha);
        else if (std::isinf(alpha))
            diff = -normal::pdf(beta);
        else if (-alpha < beta)  // factor out the larger density so the exponent stays <= 0
            diff = -normal::pdf(alpha) * std::expm1(-0.5 * (beta - alpha) * (beta + alpha));
        else
            diff = normal::pdf(beta) * std::expm1(-0.5 * (alpha - beta) * (alpha + beta));
        if (mass <= 0.0) return 0.5 * (alpha + beta);
        return diff / mass;
    }
    // 0 <= alpha < beta: scale numerator and denominator by exp(alpha^2 / 2)
    if (beta - alpha < 1e-9 * std::max(1.0, alpha)) return 0.5 * (alpha + beta);
    const double r = std::isinf(beta) ? 0.0 : std::exp(-0.5 * (beta - alpha) * (beta + alpha));
    const double num = normal::inv_sqrt_2pi * (std::isinf(beta) ? 1.0 : -std::expm1(-0.5 * (beta - alpha) * (beta + alpha)));
    const double den = 0.5 * (normal::erfcx(alpha * normal::inv_sqrt2) - normal::erfcx(beta * normal::inv_sqrt2) * r);
    if (!(den > 0.0)) return 0.5 * (alpha + beta);
    return num / den;
}

/// Draw Z | alpha < Z < beta for 0 <= alpha, using upper-tail inversion and, beyond
/// the range where the tail mass is representable, exponential-proposal rejection.
template <class Engine>
double sample_upper_truncated(double alpha, double beta, Engine& rng) {
    const double qa = normal::sf(alpha), qb = normal::sf(beta);
    if (qa > 1e-290 && qa > qb) {
        const double u = uniform_open01(rng);
        const double z = normal::isf(qa - u * (qa - qb));
        return std::clamp(z, alpha, beta);
    }
    const double lambda = 0.5 * (alpha + std::sqrt(alpha * alpha + 4.0));
    for (int guard = 0; guard < 1000000; ++guard) {
        const double z = alpha - std::log(uniform_open01(rng)) / lambda;
        if (z > beta) continue;
        if (uniform01(rng) <= std::exp(-0.5 * (z - lambda) * (z - lambda))) return z;
    }
    return alpha;
}

template <class Engine>
double sample_standard_truncated(double alpha, double beta, Engine& rng) {
    if (beta <= 0.0) return -sample_standard_truncated(-beta, -alpha, rng);
    if (alpha >= 0.0) return sample_upper_truncated(alpha, beta, rng);
    const double fa = normal::cdf(alpha), fb = normal::cdf(beta);
    const double u = uniform_open01(rng);
    return std::clamp(normal::quantile(fa + u * (fb - fa)), alpha, beta);
}

}  // namespace detail

/// sigma (phi(alpha) - phi(beta)) / (Phi(beta) - Phi(alpha)), alpha = a / sigma, beta = b / sigma.
inline double truncated_normal_mean(const TruncatedGaussianSpec& spec) {
    require(spec.sigma > 0.0, "truncated_normal_mean: sigma must be > 0");
    require(spec.lower < spec.upper, "truncated_normal_mean: need lower < upper");
    const double m = spec.sigma * detail::standard_truncated_mean(spec.lower / spec.sigma, spec.upper / spec.sigma);
    if (std::isnan(m)) throw NumericError("truncated_normal_mean: NaN");
    return std::clamp(m, spec.lower, spec.upper);
}

/// Inverse-CDF draw from the truncated Gaussian.
template <class Engine>
double sample_truncated_normal(const TruncatedGaussianSpec& spec, Engine& rng) {
    require(spec.sigma > 0.0 && spec.lower < spec.upper, "sample_truncated_normal: invalid spec");
    const double z = detail::sample_standard_truncated(spec.lower / spec.sigma, spec.upper / spec.sigma, rng);
    return std::clamp(spec.sigma * z, spec.lower, spec.upper);
}

inline TruncatedGaussianSpec noise_spec(const scheme::Stochastic& s, double p) {
    if (s.bounds == NoiseBounds::proportional)
        return {s.sigma, -(s.max_weight - 1.0) * p, (s.max_weight - 1.0) * (1.0 - p)};
    const double wd = polynomial_weight(s.max_weight, s.k, p);
    return {s.sigma, 1.0 - wd, s.max_weight - wd};
}

/// E(eps | p) for the stochastic scheme.
inline double noise_mean(const scheme::Stochastic& s, double p) {
    auto spec = noise_spec(s, p);
    if (!(spec.lower < spec.upper)) return 0.5 * (spec.lower + spec.upper);
    return truncated_normal_mean(spec);
}

/// w = w_d(p) + eps. Under weight_range bounds the result always lies in [1, W].
template <class Engine>
double sample_weight(const WeightScheme& ws, double p, Engine& rng) {
    const auto* s = std::get_if<scheme::Stochastic>(&ws);
    require(s != nullptr, "sample_weight: scheme must be stochastic");
    require(p >= 0.0 && p <= 1.0, "sample_weight: p must lie in [0,1]");
    const double wd = polynomial_weight(s->max_weight, s->k, p);
    const auto spec = noise_spec(*s, p);
    if (!(spec.lower < spec.upper)) return wd;
    const double w = wd + sample_truncated_normal(spec, rng);
    if (s->bounds == NoiseBounds::weight_range) return std::clamp(w, 1.0, s->max_weight);
    return w;
}

/// f(x, p) = (phi((1-p)x) - phi(-px)) / (x (Phi(-px) - Phi((1-p)x))), so that
/// (W-1) f(x, p) = E(eps | p) with eps truncated to (-(W-1)p, (W-1)(1-p)).
inline double f_function(double x, double p) {
    require(x > 0.0, "f_function: x must be > 0");
    require(p >= 0.0 && p <= 1.0, "f_function: p must lie in [0,1]");
    const double hi = (1.0 - p) * x, lo = -p * x;
    // lo <= 0 <= hi, so Phi(lo) - Phi(hi) = -(erf(hi/sqrt2) + erf(-lo/sqrt2)) / 2 without cancellation
    const double denom = -0.5 * (std::erf(hi * normal::inv_sqrt2) + std::erf(-lo * normal::inv_sqrt2));
    const double numer = normal::pdf(hi) - normal::pdf(lo);
    if (denom == 0.0) return 0.0;
    const double f = numer / (x * denom);
    if (std::isnan(f)) throw NumericError("f_function: NaN");
    return f;
}

// ---------------------------------------------------------------------------

/// 2 m^{k+1} - m^k.
inline double moment_criterion(const MeasureSpec& spec, int k) {
    require(k >= 1, "moment_criterion: k must be >= 1");
    return 2.0 * moment(spec, k + 1) - moment(spec, k);
}

struct KWitness {
    int k;
    double value;
};

/// Smallest k <= k_max with 2 m^{k+1} - m^k > 1e-12.
inline std::optional<KWitness> find_k(const MeasureSpec& spec, int k_max) {
    require(k_max >= 1, "find_k: k_max must be >= 1");
    for (int k = 1; k <= k_max; ++k) {
        const double v = moment_criterion(spec, k);
        if (v > 1e-12) return KWitness{k, v};
    }
    return std::nullopt;
}

struct DriftOptions {
    int quadrature_order = 64;
    int grading_levels = 24;
};

/// Limit of (1/n) sum w_i (p_i - q_i) under iid p_i ~ spec:
/// 2 m^1 - 1 + (W-1)(2 m^{k+1} - m^k) + E[(2p-1) E(eps | p)].
inline double drift(const MeasureSpec& spec, const WeightScheme& ws, const DriftOptions& opts = {}) {
    const auto* s = std::get_if<scheme::Stochastic>(&ws);
    require(s != nullptr, "drift: scheme must be stochastic");
    validate(ws);
    const double deterministic =
        2.0 * moment(spec, 1) - 1.0 + (s->max_weight - 1.0) * moment_criterion(spec, s->k);
    auto noise_term = [&](double p) { return (2.0 * p - 1.0) * noise_mean(*s, p); };
    double noise = 0.0;
    for (const auto& piece : spec.pieces()) {
        // the truncation switches on within ~x^{-1/k} of the ends, hence the graded mesh
        noise += integrate_graded([&](double p) { return piece.density(p) * noise_term(p); }, piece.lo, piece.hi,
                                  opts.quadrature_order, true, true, opts.grading_levels);
    }
    for (const auto& atom : spec.atoms()) noise += atom.mass * noise_term(atom.location);
    const double d = deterministic + noise;
    if (!std::isfinite(d)) throw NumericError("drift: non-finite result");
    return d;
}

}  // namespace jurylab
