#pragma once

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <vector>

#include "error.hpp"

namespace jurylab {

struct GaussLegendreRule {
    std::vector<double> nodes;    // on [-1, 1]
    std::vector<double> weights;
};

/// Nodes by Newton iteration on P_n from the Chebyshev initial guess.
inline GaussLegendreRule make_gauss_legendre(int order) {
    require(order >= 1, "Gauss-Legendre order must be >= 1");
    GaussLegendreRule rule;
    rule.nodes.resize(order);
    rule.weights.resize(order);
    const int half = (order + 1) / 2;
    for (int i = 0; i < half; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= order; ++k) {
                double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = pk;
            }
            double pn = order == 1 ? x : p1;
            double pn1 = order == 1 ? 1.0 : p0;
            dp = order * (x * pn - pn1) / (x * x - 1.0);
            double dx = pn / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        // recompute derivative at the converged node
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= order; ++k) {
            double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = pk;
        }
        double pn = order == 1 ? x : p1;
        double pn1 = order == 1 ? 1.0 : p0;
        dp = order * (x * pn - pn1) / (x * x - 1.0);
        double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[i] = -x;
        rule.nodes[order - 1 - i] = x;
        rule.weights[i] = w;
        rule.weights[order - 1 - i] = w;
    }
    if (order % 2 == 1) rule.nodes[order / 2] = 0.0;
    return rule;
}

/// Cached rule; rules are immutable once built so sharing them across threads is fine.
inline const GaussLegendreRule& gauss_legendre(int order) {
    static std::mutex mutex;
    static std::map<int, GaussLegendreRule> cache;
    std::lock_guard lock(mutex);
    auto it = cache.find(order);
    if (it == cache.end()) it = cache.emplace(order, make_gauss_legendre(order)).first;
    return it->second;
}

template <class Fn>
double integrate_gl(Fn&& f, double lo, double hi, int order) {
    if (!(hi > lo)) return 0.0;
    const auto& rule = gauss_legendre(order);
    const double half = 0.5 * (hi - lo);
    const double mid = 0.5 * (hi + lo);
    double sum = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
    return sum * half;
}

/// Gauss-Legendre on a mesh refined geometrically toward the flagged endpoints, for
/// integrands with an integrable endpoint singularity (sqrt or log type).
template <class Fn>
double integrate_graded(Fn&& f, double lo, double hi, int order, bool singular_lo, bool singular_hi,
                        int levels = 48) {
    if (!(hi > lo)) return 0.0;
    if (!singular_lo && !singular_hi) return integrate_gl(f, lo, hi, order);
    if (singular_lo && singular_hi) {
        double mid = 0.5 * (lo + hi);
        return integrate_graded(f, lo, mid, order, true, false, levels) +
               integrate_graded(f, mid, hi, order, false, true, levels);
    }
    const double width = hi - lo;
    double sum = 0.0;
    // cells [h/2^{j+1}, h/2^j] measured from the singular end, innermost first
    double inner = width * std::ldexp(1.0, -levels);
    for (int j = levels; j >= 1; --j) {
        double a = width * std::ldexp(1.0, -j);
        double b = width * std::ldexp(1.0, -j + 1);
        sum += singular_lo ? integrate_gl(f, lo + a, lo + b, order) : integrate_gl(f, hi - b, hi - a, order);
    }
    sum += singular_lo ? integrate_gl(f, lo, lo + inner, order) : integrate_gl(f, hi - inner, hi, order);
    return sum;
}

}  // namespace jurylab
