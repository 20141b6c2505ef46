#pragma once

#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/special_functions/erf.hpp>

namespace jurylab::normal {

inline constexpr double inv_sqrt_2pi = 0.3989422804014326779399460599343818684759;
inline constexpr double inv_sqrt2 = 0.7071067811865475244008443621048490392848;

inline double pdf(double x) {
    if (std::isinf(x)) return 0.0;
    return inv_sqrt_2pi * std::exp(-0.5 * x * x);
}

inline double cdf(double x) { return 0.5 * std::erfc(-x * inv_sqrt2); }

/// Upper tail 1 - cdf(x), accurate for large x.
inline double sf(double x) { return 0.5 * std::erfc(x * inv_sqrt2); }

/// Scaled complementary error function exp(x^2) erfc(x) for x >= 0.
inline double erfcx(double x) {
    if (std::isinf(x)) return 0.0;
    if (x < 25.0) return std::exp(x * x) * std::erfc(x);
    // asymptotic series; at x >= 25 the terms shrink by ~1/1250 each
    const double inv2x2 = 1.0 / (2.0 * x * x);
    double term = 1.0, sum = 1.0;
    for (int k = 1; k <= 8; ++k) {
        term *= -(2.0 * k - 1.0) * inv2x2;
        sum += term;
    }
    return sum / (x * std::sqrt(std::numbers::pi));
}

/// Standard normal quantile for p in (0, 1).
inline double quantile(double p) {
    if (p <= 0.0) return -std::numeric_limits<double>::infinity();
    if (p >= 1.0) return std::numeric_limits<double>::infinity();
    return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * p);
}

/// Quantile of the upper tail: x with sf(x) = q.
inline double isf(double q) {
    if (q <= 0.0) return std::numeric_limits<double>::infinity();
    if (q >= 1.0) return -std::numeric_limits<double>::infinity();
    return std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * q);
}

}  // namespace jurylab::normal
