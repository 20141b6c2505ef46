#pragma once

// Competence profiles p_1..p_n and the finite-n diagnostics of the CJP conditions.

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "error.hpp"
#include "measure.hpp"
#include "rng.hpp"

namespace jurylab {

namespace source {

struct Iid {
    MeasureSpec measure;
};
struct Explicit {
    std::vector<double> competences;
};
/// p_i = 1/2 + eps.
struct Condorcet {
    double eps;
};
/// p_i = 1 for the first floor(informed_fraction * n) voters, 1/2 for the rest.
struct Moa {
    double informed_fraction;
};
/// p_i = 1/2 + min{i^alpha, 1/2}, alpha in (-1/2, 0).
struct C1 {
    double alpha;
};
/// prefix in {0,1}, then 1, 1, 0, 1, 0, 1, ...
struct C2 {
    std::vector<int> prefix;
};

}  // namespace source

using ProfileSource = std::variant<source::Iid, source::Explicit, source::Condorcet, source::Moa, source::C1, source::C2>;

struct Profile {
    std::vector<double> competences;
    ProfileSource source;
    std::optional<std::uint64_t> seed;

    std::size_t size() const { return competences.size(); }
};

inline std::string describe(const ProfileSource& src) {
    struct Visitor {
        std::string operator()(const source::Iid& s) const { return "iid(" + s.measure.label() + ")"; }
        std::string operator()(const source::Explicit& s) const {
            return "explicit(n=" + std::to_string(s.competences.size()) + ")";
        }
        std::string operator()(const source::Condorcet& s) const { return "condorcet(" + std::to_string(s.eps) + ")"; }
        std::string operator()(const source::Moa& s) const { return "moa(" + std::to_string(s.informed_fraction) + ")"; }
        std::string operator()(const source::C1& s) const { return "c1(" + std::to_string(s.alpha) + ")"; }
        std::string operator()(const source::C2& s) const {
            return "c2(prefix=" + std::to_string(s.prefix.size()) + ")";
        }
    };
    return std::visit(Visitor{}, src);
}

inline void validate(const ProfileSource& src) {
    struct Visitor {
        void operator()(const source::Iid&) const {}
        void operator()(const source::Explicit& s) const {
            for (double p : s.competences) require(p >= 0.0 && p <= 1.0, "explicit profile: competences must lie in [0,1]");
        }
        void operator()(const source::Condorcet& s) const {
            require(s.eps > 0.0 && s.eps <= 0.5, "condorcet: eps must lie in (0, 1/2]");
        }
        void operator()(const source::Moa& s) const {
            require(s.informed_fraction > 0.0 && s.informed_fraction <= 1.0, "moa: informed fraction must lie in (0, 1]");
        }
        void operator()(const source::C1& s) const {
            require(s.alpha > -0.5 && s.alpha < 0.0, "c1: alpha must lie in (-1/2, 0)");
        }
        void operator()(const source::C2& s) const {
            for (int v : s.prefix) require(v == 0 || v == 1, "c2: prefix entries must be 0 or 1");
        }
    };
    std::visit(Visitor{}, src);
}

/// Competence of voter i (1-based) for the analytic families.
inline double c1_competence(double alpha, std::size_t i) { return 0.5 + std::min(std::pow(double(i), alpha), 0.5); }

inline double c2_competence(const std::vector<int>& prefix, std::size_t i) {
    if (i <= prefix.size()) return prefix[i - 1];
    std::size_t j = i - prefix.size() - 1;  // 0-based position in the tail
    return (j == 0 || j % 2 == 1) ? 1.0 : 0.0;
}

inline Profile generate(const ProfileSource& src, std::size_t n, std::uint64_t seed) {
    require(n >= 1 && n % 2 == 1, "generate: n must be an odd positive integer");
    validate(src);
    Profile out{{}, src, seed};
    out.competences.resize(n);
    struct Visitor {
        Profile& out;
        std::size_t n;
        std::uint64_t seed;
        void operator()(const source::Iid& s) const {
            for (std::size_t i = 0; i < n; ++i) {
                auto rng = substream(seed, i);
                out.competences[i] = sample(s.measure, rng);
            }
        }
        void operator()(const source::Explicit& s) const {
            require(s.competences.size() >= n, "explicit profile shorter than requested n");
            for (std::size_t i = 0; i < n; ++i) out.competences[i] = s.competences[i];
        }
        void operator()(const source::Condorcet& s) const {
            for (auto& p : out.competences) p = 0.5 + s.eps;
        }
        void operator()(const source::Moa& s) const {
            auto informed = static_cast<std::size_t>(std::floor(s.informed_fraction * double(n) + 1e-9));
            for (std::size_t i = 0; i < n; ++i) out.competences[i] = i < informed ? 1.0 : 0.5;
        }
        void operator()(const source::C1& s) const {
            for (std::size_t i = 0; i < n; ++i) out.competences[i] = c1_competence(s.alpha, i + 1);
        }
        void operator()(const source::C2& s) const {
            for (std::size_t i = 0; i < n; ++i) out.competences[i] = c2_competence(s.prefix, i + 1);
        }
    };
    std::visit(Visitor{out, n, seed}, src);
    return out;
}

inline Profile explicit_profile(std::vector<double> competences) {
    source::Explicit src{competences};
    validate(src);
    return Profile{std::move(competences), src, std::nullopt};
}

// ---------------------------------------------------------------------------
// Diagnostics.

/// Q_n = (sum p_i - n/2) / sqrt(sum p_i q_i); empty when every p_i is 0 or 1.
inline std::optional<double> q_statistic(const std::vector<double>& p) {
    double num = 0.0, var = 0.0;
    for (double x : p) {
        num += x - 0.5;
        var += x * (1.0 - x);
    }
    if (!(var > 0.0)) return std::nullopt;
    return num / std::sqrt(var);
}

inline std::optional<double> q_statistic(const Profile& profile) { return q_statistic(profile.competences); }

/// S_k > k/2 for every odd k in [n0, n], with S_k the number of exact ones among p_1..p_k.
inline bool condition_two_holds(const Profile& profile, std::size_t n0) {
    const std::size_t n = profile.size();
    require(n0 >= 1 && n0 <= n, "condition_two_holds: need 1 <= n0 <= n");
    std::size_t ones = 0;
    for (std::size_t k = 1; k <= n; ++k) {
        if (profile.competences[k - 1] == 1.0) ++ones;
        if (k >= n0 && k % 2 == 1 && !(2 * ones > k)) return false;
    }
    return true;
}

struct ConditionReport {
    std::vector<std::size_t> checkpoints;
    std::vector<std::optional<double>> q_trace;
    std::vector<double> s_trace;  // S_k - k/2
    std::vector<double> running_mean;
    std::vector<std::optional<double>> chebyshev_bounds;
    std::vector<double> gen_cent;    // (1/sqrt k) sum (m_i - 1/2)
    std::vector<double> gen_noconc;  // (1/k) sum (m_i - second moment_i)
    std::vector<double> gen_eps1;    // (1/k) sum eps_{1i}
    std::vector<double> sigma_t;     // sqrt(sum E (p_i - m_i)^2)
    std::string label = "diagnostic";
};

namespace detail {

/// First and second moments and atom-at-one of the factor measure nu_i.
struct FactorMoments {
    double m1, m2, eps1;
};

inline FactorMoments factor_moments(const ProfileSource& src, double realized) {
    if (const auto* iid = std::get_if<source::Iid>(&src))
        return {moment(iid->measure, 1), moment(iid->measure, 2), atom_mass(iid->measure, 1.0)};
    return {realized, realized * realized, realized == 1.0 ? 1.0 : 0.0};
}

}  // namespace detail

/// Geometric grid {n0 * 2^j} forced odd, capped at n_max (which is always included).
inline std::vector<std::size_t> geometric_checkpoints(std::size_t n0, std::size_t n_max) {
    require(n0 >= 1 && n0 <= n_max, "checkpoints: need 1 <= n0 <= n_max");
    std::vector<std::size_t> grid;
    for (std::size_t k = n0; k < n_max; k *= 2) {
        std::size_t odd = k % 2 == 1 ? k : k + 1;
        if (odd < n_max && (grid.empty() || odd > grid.back())) grid.push_back(odd);
    }
    grid.push_back(n_max % 2 == 1 ? n_max : n_max - 1);
    return grid;
}

inline ConditionReport condition_report(const ProfileSource& src, const std::vector<std::size_t>& checkpoints,
                                        std::uint64_t seed) {
    require(!checkpoints.empty(), "condition_report: no checkpoints");
    for (std::size_t k = 0; k < checkpoints.size(); ++k) {
        require(checkpoints[k] % 2 == 1, "condition_report: checkpoints must be odd");
        require(k == 0 || checkpoints[k] > checkpoints[k - 1], "condition_report: checkpoints must increase");
    }
    const Profile profile = generate(src, checkpoints.back(), seed);
    ConditionReport r;
    r.checkpoints = checkpoints;
    double sum_p = 0.0, sum_pq = 0.0, ones = 0.0;
    double sum_m = 0.0, sum_noconc = 0.0, sum_eps1 = 0.0, sum_var = 0.0;
    std::size_t next = 0;
    for (std::size_t k = 1; k <= checkpoints.back(); ++k) {
        const double p = profile.competences[k - 1];
        sum_p += p;
        sum_pq += p * (1.0 - p);
        if (p == 1.0) ones += 1.0;
        const auto fm = detail::factor_moments(src, p);
        sum_m += fm.m1 - 0.5;
        sum_noconc += fm.m1 - fm.m2;
        sum_eps1 += fm.eps1;
        sum_var += fm.m2 - fm.m1 * fm.m1;
        if (k != checkpoints[next]) continue;
        const double kd = double(k);
        const double drift = sum_p - 0.5 * kd;
        r.q_trace.push_back(sum_pq > 0.0 ? std::optional<double>(drift / std::sqrt(sum_pq)) : std::nullopt);
        r.s_trace.push_back(ones - 0.5 * kd);
        r.running_mean.push_back(sum_p / kd);
        // Var(mean) / (E mean - 1/2)^2; the 1/k^2 factors cancel
        r.chebyshev_bounds.push_back(drift > 0.0 ? std::optional<double>(sum_pq / (drift * drift)) : std::nullopt);
        r.gen_cent.push_back(sum_m / std::sqrt(kd));
        r.gen_noconc.push_back(sum_noconc / kd);
        r.gen_eps1.push_back(sum_eps1 / kd);
        r.sigma_t.push_back(std::sqrt(std::max(sum_var, 0.0)));
        ++next;
    }
    return r;
}

}  // namespace jurylab
