#pragma once

// Probability that (weighted) majority picks the correct option.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "error.hpp"
#include "parallel.hpp"
#include "profile.hpp"
#include "rng.hpp"

namespace jurylab {

enum class TallyMethod { exact_dp, brute_force, monte_carlo };

inline std::string to_string(TallyMethod m) {
    switch (m) {
        case TallyMethod::exact_dp: return "exact_dp";
        case TallyMethod::brute_force: return "brute_force";
        case TallyMethod::monte_carlo: return "monte_carlo";
    }
    return "?";
}

struct TallyEstimate {
    double value = 0.0;
    TallyMethod method = TallyMethod::exact_dp;
    double half_width = 0.0;  // 95% CI for Monte Carlo, 0 for exact methods
    std::uint64_t n_replicas = 0;
    std::optional<double> tie_probability;  // brute force only
};

inline constexpr std::size_t kMaxExactVoters = 200001;
inline constexpr std::size_t kMaxBruteVoters = 25;

/// Sum of terms, smallest magnitude first.
inline double sorted_sum(std::vector<double> terms) {
    std::sort(terms.begin(), terms.end(), [](double a, double b) { return std::abs(a) < std::abs(b); });
    double s = 0.0;
    for (double t : terms) s += t;
    return s;
}

/// Poisson-binomial pmf of the number of correct votes, by the O(n^2) convolution.
inline std::vector<double> poisson_binomial_pmf(const std::vector<double>& p) {
    const std::size_t n = p.size();
    std::vector<double> cur(n + 1, 0.0), next(n + 1, 0.0);
    cur[0] = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double pi = p[i], qi = 1.0 - pi;
        next[0] = cur[0] * qi;
        const std::size_t top = i + 1;
        for (std::size_t j = 1; j <= top; ++j) next[j] = cur[j] * qi + cur[j - 1] * pi;
        std::swap(cur, next);
    }
    return cur;
}

/// P(sum X_i > n/2) for independent X_i ~ Bernoulli(p_i), n odd.
inline TallyEstimate majority_prob_exact(const std::vector<double>& p) {
    const std::size_t n = p.size();
    require(n >= 1 && n % 2 == 1, "majority_prob_exact: n must be odd (ties are out of scope)");
    require(n <= kMaxExactVoters, "majority_prob_exact: n exceeds " + std::to_string(kMaxExactVoters));
    for (double x : p) require(x >= 0.0 && x <= 1.0, "majority_prob_exact: competences must lie in [0,1]");
    const auto pmf = poisson_binomial_pmf(p);
    std::vector<double> tail(pmf.begin() + static_cast<std::ptrdiff_t>(n / 2 + 1), pmf.end());
    const double value = sorted_sum(std::move(tail));
    if (!std::isfinite(value)) throw NumericError("majority_prob_exact: non-finite result");
    return {std::clamp(value, 0.0, 1.0), TallyMethod::exact_dp, 0.0, 0, std::nullopt};
}

inline TallyEstimate majority_prob_exact(const Profile& profile) { return majority_prob_exact(profile.competences); }

/// P(sum X_i < n/2): majority on the reflected profile 1 - p_i.
inline TallyEstimate anti_majority_prob_exact(const std::vector<double>& p) {
    std::vector<double> flipped(p.size());
    std::transform(p.begin(), p.end(), flipped.begin(), [](double x) { return 1.0 - x; });
    return majority_prob_exact(flipped);
}

inline TallyEstimate anti_majority_prob_exact(const Profile& profile) {
    return anti_majority_prob_exact(profile.competences);
}

// ---------------------------------------------------------------------------
// Weighted rule: sign(sum w_i X_i), X_i in {-1, +1}; ties count as failure.

enum class TallyMode { automatic, brute, mc };

struct WeightedOptions {
    TallyMode mode = TallyMode::automatic;
    std::uint64_t replicas = 10000;
    std::uint64_t seed = 0;
    unsigned threads = 0;
};

namespace detail {

inline double tie_tolerance(const std::vector<double>& w) {
    double scale = 0.0;
    for (double x : w) scale += std::abs(x);
    return 1e-12 * scale;
}

struct BruteAccumulator {
    const std::vector<double>& p;
    const std::vector<double>& w;
    double tol;
    double win = 0.0;
    double tie = 0.0;

    void visit(std::size_t i, double prob, double sum) {
        if (prob == 0.0) return;
        if (i == p.size()) {
            if (sum > tol)
                win += prob;
            else if (sum >= -tol)
                tie += prob;
            return;
        }
        visit(i + 1, prob * p[i], sum + w[i]);
        visit(i + 1, prob * (1.0 - p[i]), sum - w[i]);
    }
};

}  // namespace detail

inline TallyEstimate weighted_majority_brute(const std::vector<double>& p, const std::vector<double>& w) {
    require(p.size() <= kMaxBruteVoters, "weighted_majority_prob: brute force limited to n <= 25");
    detail::BruteAccumulator acc{p, w, detail::tie_tolerance(w)};
    acc.visit(0, 1.0, 0.0);
    return {std::clamp(acc.win, 0.0, 1.0), TallyMethod::brute_force, 0.0, 0, acc.tie};
}

inline TallyEstimate weighted_majority_mc(const std::vector<double>& p, const std::vector<double>& w,
                                          std::uint64_t replicas, std::uint64_t seed, unsigned threads = 0) {
    require(replicas >= 100, "weighted_majority_prob: replicas must be >= 100");
    const double tol = detail::tie_tolerance(w);
    std::vector<unsigned char> wins(replicas, 0);
    parallel_for(
        replicas,
        [&](std::size_t r) {
            auto rng = substream(seed, r);
            double sum = 0.0;
            for (std::size_t i = 0; i < p.size(); ++i) sum += uniform01(rng) < p[i] ? w[i] : -w[i];
            wins[r] = sum > tol ? 1 : 0;
        },
        threads);
    std::uint64_t count = 0;
    for (auto v : wins) count += v;
    const double est = double(count) / double(replicas);
    const double hw = 1.96 * std::sqrt(est * (1.0 - est) / double(replicas));
    return {est, TallyMethod::monte_carlo, hw, replicas, std::nullopt};
}

inline TallyEstimate weighted_majority_prob(const std::vector<double>& p, const std::vector<double>& w,
                                            const WeightedOptions& opts = {}) {
    require(!p.empty(), "weighted_majority_prob: empty profile");
    require(w.size() == p.size(), "weighted_majority_prob: weights length must equal n");
    bool any_nonzero = false;
    for (double x : w) {
        require(std::isfinite(x), "weighted_majority_prob: weights must be finite");
        any_nonzero = any_nonzero || x != 0.0;
    }
    require(any_nonzero, "weighted_majority_prob: all weights are zero");
    for (double x : p) require(x >= 0.0 && x <= 1.0, "weighted_majority_prob: competences must lie in [0,1]");

    switch (opts.mode) {
        case TallyMode::brute: return weighted_majority_brute(p, w);
        case TallyMode::mc: return weighted_majority_mc(p, w, opts.replicas, opts.seed, opts.threads);
        case TallyMode::automatic: break;
    }
    const bool equal_positive = std::all_of(w.begin(), w.end(), [&](double x) { return x == w.front(); }) && w.front() > 0.0;
    if (equal_positive && p.size() % 2 == 1 && p.size() > kMaxBruteVoters) return majority_prob_exact(p);
    if (p.size() <= kMaxBruteVoters) return weighted_majority_brute(p, w);
    return weighted_majority_mc(p, w, opts.replicas, opts.seed, opts.threads);
}

inline TallyEstimate weighted_majority_prob(const Profile& profile, const std::vector<double>& w,
                                            const WeightedOptions& opts = {}) {
    return weighted_majority_prob(profile.competences, w, opts);
}

/// Chebyshev bound 4 sum w^2 p q / (sum w (p - q))^2 on P(X^w <= 0); empty when the drift is not positive.
inline std::optional<double> weighted_chebyshev_bound(const std::vector<double>& p, const std::vector<double>& w) {
    require(w.size() == p.size(), "weighted_chebyshev_bound: weights length must equal n");
    double var = 0.0, drift = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double q = 1.0 - p[i];
        var += w[i] * w[i] * p[i] * q;
        drift += w[i] * (p[i] - q);
    }
    if (!(drift > 0.0)) return std::nullopt;
    return 4.0 * var / (drift * drift);
}

}  // namespace jurylab
