#pragma once

// Ballot-path combinatorics and random-walk experiments for the all-or-nothing
// competence measure 1/2 (delta_0 + delta_1).

#include <bit>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "error.hpp"
#include "measure.hpp"
#include "parallel.hpp"
#include "rng.hpp"

namespace jurylab {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// C_n = binom(2n, n) / (n + 1), via C_{k+1} = C_k * 2(2k+1) / (k+2).
inline BigInt catalan(std::uint64_t n) {
    require(n <= 100000, "catalan: n must be <= 1e5");
    BigInt c = 1;
    for (std::uint64_t k = 0; k < n; ++k) {
        c *= 2 * (2 * k + 1);
        c /= (k + 2);
    }
    return c;
}

/// binom(2n, n).
inline BigInt central_binomial(std::uint64_t n) {
    BigInt b = 1;
    for (std::uint64_t k = 0; k < n; ++k) {
        b *= (2 * k + 1) * (2 * k + 2);
        b /= (k + 1) * (k + 1);
    }
    return b;
}

inline constexpr int kMaxEnumeratedBorder = 12;

struct PathCount {
    int m = 1;
    BigInt numerator;    // binom(2(m+1), m+1), unreduced
    BigInt denominator;  // 2^{2(m+1)}
    Rational closed_form;
    double value = 0.0;
    std::optional<Rational> enumerated;  // m <= 12

    double asymptote() const { return 1.0 / std::sqrt(std::numbers::pi * m); }
    double ratio() const { return value / asymptote(); }
};

/// Number of 0/1 sequences of length 2m+1 with S_k > k/2 at every odd k.
inline std::uint64_t enumerate_border_count(int m) {
    require(m >= 1 && m <= kMaxEnumeratedBorder, "enumerate_border_count: need 1 <= m <= 12");
    const int length = 2 * m + 1;
    const std::uint64_t total = std::uint64_t{1} << length;
    std::uint64_t count = 0;
    for (std::uint64_t x = 0; x < total; ++x) {
        bool ok = true;
        for (int k = 1; k <= length && ok; k += 2) {
            const std::uint64_t mask = (std::uint64_t{1} << k) - 1;
            ok = 2 * std::popcount(x & mask) > k;
        }
        if (ok) ++count;
    }
    return count;
}

/// mu(B_{1,2m+1}) under 1/2 (delta_0 + delta_1): 2^{-2(m+1)} binom(2(m+1), m+1).
inline PathCount border_measure(int m, bool enumerate = true) {
    require(m >= 1, "border_measure: m must be >= 1");
    PathCount pc;
    pc.m = m;
    pc.numerator = central_binomial(m + 1);
    pc.denominator = BigInt(1) << (2 * (m + 1));
    pc.closed_form = Rational(pc.numerator, pc.denominator);
    // prod_{j<=m+1} (2j-1)/(2j), relative error O(m ulp)
    double v = 1.0;
    for (int j = 1; j <= m + 1; ++j) v *= (2.0 * j - 1.0) / (2.0 * j);
    pc.value = v;
    if (enumerate && m <= kMaxEnumeratedBorder)
        pc.enumerated = Rational(BigInt(enumerate_border_count(m)), BigInt(1) << (2 * m + 1));
    return pc;
}

/// 1/2 - 1/4 sum_{i<m} C_{i+1} / 2^{2i+1}: the telescoped border recurrence.
inline Rational border_partial_sum(int m) {
    require(m >= 1, "border_partial_sum: m must be >= 1");
    Rational s(1, 2);
    for (int i = 0; i < m; ++i) s -= Rational(catalan(i + 1), BigInt(4) * (BigInt(1) << (2 * i + 1)));
    return s;
}

// ---------------------------------------------------------------------------

struct ProportionEstimate {
    double value = 0.0;
    double half_width = 0.0;  // normal-approximation 95%
    std::uint64_t trials = 0;
};

inline ProportionEstimate proportion(std::uint64_t hits, std::uint64_t trials) {
    const double v = double(hits) / double(trials);
    return {v, 1.96 * std::sqrt(v * (1.0 - v) / double(trials)), trials};
}

/// First time a symmetric +-1 walk from 0 reaches `level`, or -1 if not within `horizon` steps.
/// Replica r consumes substream (seed, r), so estimates at different horizons are coupled.
inline std::vector<std::int64_t> first_passage_times(std::int64_t level, std::int64_t horizon, std::uint64_t replicas,
                                                     std::uint64_t seed, unsigned threads = 0) {
    require(horizon >= 0, "random walk: horizon must be >= 0");
    std::vector<std::int64_t> times(replicas, -1);
    if (level == 0) {
        std::fill(times.begin(), times.end(), 0);
        return times;
    }
    parallel_for(
        replicas,
        [&](std::size_t r) {
            auto rng = substream(seed, r);
            std::int64_t pos = 0;
            std::int64_t t = 0;
            while (t < horizon) {
                std::uint64_t bits = rng();
                const int chunk = static_cast<int>(std::min<std::int64_t>(64, horizon - t));
                for (int b = 0; b < chunk; ++b) {
                    pos += (bits >> b) & 1U ? 1 : -1;
                    ++t;
                    if (pos == level) {
                        times[r] = t;
                        return;
                    }
                }
            }
        },
        threads);
    return times;
}

inline ProportionEstimate random_walk_return(std::int64_t level, std::int64_t horizon, std::uint64_t replicas,
                                             std::uint64_t seed, unsigned threads = 0) {
    require(horizon >= std::abs(level), "random_walk_return: horizon must be >= |k|");
    require(replicas >= 100, "random_walk_return: replicas must be >= 100");
    const auto times = first_passage_times(level, horizon, replicas, seed, threads);
    std::uint64_t hits = 0;
    for (auto t : times) hits += (t >= 0 && t <= horizon) ? 1 : 0;
    return proportion(hits, replicas);
}

/// Fraction of iid profiles of length n in which more than eps*n voters have p_i in [1 - eps0, 1].
inline ProportionEstimate moa_fraction_experiment(const MeasureSpec& spec, double eps0, double eps, std::uint64_t n,
                                                  std::uint64_t trials, std::uint64_t seed, unsigned threads = 0) {
    require(eps0 >= 0.0 && eps0 < 0.5, "moa_fraction_experiment: eps0 must lie in [0, 1/2)");
    require(eps >= 0.0 && eps < 1.0, "moa_fraction_experiment: eps must lie in [0, 1)");
    require(n >= 1, "moa_fraction_experiment: n must be >= 1");
    require(trials >= 100, "moa_fraction_experiment: trials must be >= 100");
    const double lo = 1.0 - eps0;
    std::vector<unsigned char> success(trials, 0);
    parallel_for(
        trials,
        [&](std::size_t t) {
            std::uint64_t count = 0;
            for (std::uint64_t i = 0; i < n; ++i) {
                auto rng = substream(seed, t, i);
                const double p = sample(spec, rng);
                if (p >= lo) ++count;
            }
            success[t] = double(count) > eps * double(n) ? 1 : 0;
        },
        threads);
    std::uint64_t hits = 0;
    for (auto s : success) hits += s;
    return proportion(hits, trials);
}

}  // namespace jurylab
