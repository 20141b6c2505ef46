#pragma once

// Distances and divergences between MeasureSpecs, and the Kakutani product test.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "error.hpp"
#include "measure.hpp"
#include "quadrature.hpp"

namespace jurylab {

struct DivergenceReport {
    double tv = 0.0;  // L1 norm of the density difference (twice the sup-set convention)
    double kl = 0.0;  // KL(p || q); +inf when p is not absolutely continuous w.r.t. q
    double hellinger_affinity = 1.0;
    double hellinger_distance = 0.0;
    double bhattacharyya = 0.0;
};

struct DivergenceOptions {
    int quadrature_order = 20;
};

namespace detail {

struct Affine {
    double c0 = 0.0;
    double c1 = 0.0;
    double operator()(double x) const { return c0 + c1 * x; }
};

/// Coefficients of the density valid around x, zero outside every piece.
inline Affine affine_at(const MeasureSpec& spec, double x) {
    for (const auto& p : spec.pieces())
        if (x > p.lo && x < p.hi) return {p.c0, p.c1};
    return {};
}

inline void add_root(std::vector<double>& grid, const Affine& f, double lo, double hi) {
    if (f.c1 == 0.0) return;
    double r = -f.c0 / f.c1;
    if (r > lo && r < hi) grid.push_back(r);
}

/// Cell boundaries on which both densities and their difference are affine and sign-definite.
inline std::vector<double> merged_grid(const MeasureSpec& p, const MeasureSpec& q) {
    std::vector<double> grid{0.0, 1.0};
    for (const auto* spec : {&p, &q})
        for (const auto& piece : spec->pieces()) {
            grid.push_back(piece.lo);
            grid.push_back(piece.hi);
            add_root(grid, {piece.c0, piece.c1}, piece.lo, piece.hi);
        }
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    // roots of the difference need the first pass of cells
    std::vector<double> extra;
    for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
        double mid = 0.5 * (grid[k] + grid[k + 1]);
        Affine u = affine_at(p, mid), v = affine_at(q, mid);
        add_root(extra, {u.c0 - v.c0, u.c1 - v.c1}, grid[k], grid[k + 1]);
    }
    grid.insert(grid.end(), extra.begin(), extra.end());
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    return grid;
}

inline bool near_zero_end(double at_end, double other_end) {
    return at_end <= 0.0 || at_end < 0.5 * other_end;
}

}  // namespace detail

inline DivergenceReport divergences(const MeasureSpec& p, const MeasureSpec& q, const DivergenceOptions& opts = {}) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    const int order = opts.quadrature_order;
    double tv = 0.0, kl = 0.0, affinity = 0.0;

    const auto grid = detail::merged_grid(p, q);
    for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
        const double a = grid[k], b = grid[k + 1];
        const double mid = 0.5 * (a + b);
        const auto u = detail::affine_at(p, mid);
        const auto v = detail::affine_at(q, mid);
        const double ua = std::max(u(a), 0.0), ub = std::max(u(b), 0.0);
        const double va = std::max(v(a), 0.0), vb = std::max(v(b), 0.0);
        const bool u_zero = u(mid) <= 0.0;
        const bool v_zero = v(mid) <= 0.0;
        // interpolate between clamped endpoint values: nonnegative on the whole cell,
        // and exact near a root where c0 + c1 x would round below zero
        const double width = b - a;
        auto uc = [&](double x) { return ua + (ub - ua) * ((x - a) / width); };
        auto vc = [&](double x) { return va + (vb - va) * ((x - a) / width); };

        tv += integrate_gl([&](double x) { return std::abs(uc(x) - vc(x)); }, a, b, order);
        if (u_zero) continue;
        if (v_zero) {
            kl = inf;
            continue;
        }
        const bool sing_lo = detail::near_zero_end(ua, ub) || detail::near_zero_end(va, vb);
        const bool sing_hi = detail::near_zero_end(ub, ua) || detail::near_zero_end(vb, va);
        affinity += integrate_graded(
            [&](double x) { return std::sqrt(uc(x) * vc(x)); }, a, b, order, sing_lo, sing_hi);
        if (kl < inf) {
            kl += integrate_graded(
                [&](double x) {
                    const double ux = uc(x), vx = vc(x);
                    if (ux <= 0.0) return 0.0;  // 0 log 0 := 0
                    return ux * (std::log(ux) - std::log(vx));
                },
                a, b, order, sing_lo, sing_hi);
        }
    }

    std::set<double> locations;
    for (const auto& at : p.atoms()) locations.insert(at.location);
    for (const auto& at : q.atoms()) locations.insert(at.location);
    for (double x : locations) {
        const double mp = p.atom_at(x), mq = q.atom_at(x);
        tv += std::abs(mp - mq);
        affinity += std::sqrt(mp * mq);
        if (mp > 0.0) kl = mq > 0.0 ? kl + mp * std::log(mp / mq) : inf;
    }

    DivergenceReport r;
    r.tv = tv;
    r.kl = std::isinf(kl) ? inf : std::max(kl, 0.0);
    r.hellinger_affinity = std::clamp(affinity, 0.0, 1.0);
    r.hellinger_distance = std::sqrt(2.0 * (1.0 - r.hellinger_affinity));
    r.bhattacharyya = r.hellinger_affinity > 0.0 ? -std::log(r.hellinger_affinity) : inf;
    if (std::isnan(r.tv) || std::isnan(r.kl) || std::isnan(r.hellinger_affinity))
        throw NumericError("divergences: NaN in quadrature");
    return r;
}

/// p << q: every p-atom is a q-atom and q's density is positive wherever p's is.
inline bool absolutely_continuous(const MeasureSpec& p, const MeasureSpec& q) {
    for (const auto& at : p.atoms())
        if (at.mass > 0.0 && q.atom_at(at.location) <= 0.0) return false;
    const auto grid = detail::merged_grid(p, q);
    for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
        const double mid = 0.5 * (grid[k] + grid[k + 1]);
        if (detail::affine_at(p, mid)(mid) > 0.0 && detail::affine_at(q, mid)(mid) <= 0.0) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// Kakutani dichotomy diagnostics.

enum class DivergenceChoice { tv, kl, bhattacharyya };
enum class KakutaniDiagnosis { summable, diverging, inconclusive };

inline std::string to_string(KakutaniDiagnosis d) {
    switch (d) {
        case KakutaniDiagnosis::summable: return "summable";
        case KakutaniDiagnosis::diverging: return "diverging";
        case KakutaniDiagnosis::inconclusive: return "inconclusive";
    }
    return "?";
}

struct KakutaniVerdict {
    std::vector<double> partial_sums;      // sum_{n<=N} d(nu_n, nu_0)
    std::vector<double> partial_products;  // prod_{n<=N} H(nu_0, nu_n)
    KakutaniDiagnosis diagnosis = KakutaniDiagnosis::inconclusive;
};

struct KakutaniOptions {
    double tail_tolerance = 1e-3;  // |s_N - s_{N/2}| < tol * s_N  => summable
    double cap = 1e6;              // s_N > cap                  => diverging
    double growth_fraction = 0.25;  // s_N - s_{N/2} >= frac * s_N => diverging
    DivergenceOptions divergence{};
};

/// Finite-horizon evidence for sum_n d(nu_n, nu_0) < infinity. perturbation(n) gives nu_n, n = 1..horizon.
inline KakutaniVerdict kakutani_criterion(const MeasureSpec& base,
                                          const std::function<MeasureSpec(int)>& perturbation,
                                          DivergenceChoice choice, int horizon, const KakutaniOptions& opts = {}) {
    require(horizon >= 4, "kakutani_criterion: horizon must be >= 4");
    KakutaniVerdict verdict;
    double sum = 0.0, product = 1.0;
    bool singular = false;
    for (int n = 1; n <= horizon; ++n) {
        const MeasureSpec nu = perturbation(n);
        if (!absolutely_continuous(nu, base)) singular = true;
        const auto report = divergences(nu, base, opts.divergence);
        double term = 0.0;
        switch (choice) {
            case DivergenceChoice::tv: term = report.tv; break;
            case DivergenceChoice::kl: term = report.kl; break;
            case DivergenceChoice::bhattacharyya: term = report.bhattacharyya; break;
        }
        sum += term;
        product *= report.hellinger_affinity;
        verdict.partial_sums.push_back(sum);
        verdict.partial_products.push_back(product);
    }
    if (singular) {
        verdict.diagnosis = KakutaniDiagnosis::diverging;
        return verdict;
    }
    const double s_n = verdict.partial_sums.back();
    const double s_half = verdict.partial_sums[horizon / 2 - 1];
    const double tail = s_n - s_half;
    if (std::isinf(s_n) || s_n > opts.cap || (s_n > 0.0 && tail >= opts.growth_fraction * s_n))
        verdict.diagnosis = KakutaniDiagnosis::diverging;
    else if (s_n == 0.0 || std::abs(tail) < opts.tail_tolerance * s_n)
        verdict.diagnosis = KakutaniDiagnosis::summable;
    else
        verdict.diagnosis = KakutaniDiagnosis::inconclusive;
    return verdict;
}

}  // namespace jurylab
