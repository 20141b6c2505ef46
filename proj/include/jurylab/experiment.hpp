#pragma once

// Sampled-profile reproductions: draw many iid profiles per electorate size, evaluate
// the (weighted) majority win probability of each, and summarize the distribution.
// Frequencies over sampled profiles stand in for the almost-sure statements; every
// report is labelled desk-scale evidence.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "error.hpp"
#include "measure.hpp"
#include "parallel.hpp"
#include "profile.hpp"
#include "report.hpp"
#include "rng.hpp"
#include "tally.hpp"
#include "weights.hpp"

namespace jurylab {

struct ExperimentConfig {
    MeasureSpec measure = lebesgue();
    WeightScheme scheme = scheme::Unit{};
    std::vector<std::size_t> n_grid;
    std::size_t profiles_per_n = 100;
    TallyMode tally_mode = TallyMode::automatic;
    std::uint64_t replicas = 10000;
    std::uint64_t seed = 0;
    double high = 0.99;
    double low = 0.01;
    unsigned threads = 0;  // not part of the config hash: results are worker-count independent
};

struct ExperimentRow {
    std::size_t n = 0;
    double high_fraction = 0.0;
    double low_fraction = 0.0;
    double median_win = 0.0;
    std::optional<double> mean_q;
    double drift_estimate = 0.0;
    TallyMethod method = TallyMethod::exact_dp;
    double max_half_width = 0.0;
};

struct ExperimentReport {
    std::vector<ExperimentRow> rows;
    std::uint64_t config_hash = 0;
    std::uint64_t seed = 0;
    std::vector<std::string> warnings;
    /// Per-row win probabilities, profile order preserved.
    std::vector<std::vector<double>> win_probabilities;
    std::string label = "desk-scale evidence";
};

// ---------------------------------------------------------------------------
// Serialization (same document family as MeasureSpec).

inline std::string to_string(NoiseBounds b) { return b == NoiseBounds::proportional ? "proportional" : "weight_range"; }

inline std::string to_string(TallyMode m) {
    switch (m) {
        case TallyMode::automatic: return "auto";
        case TallyMode::brute: return "brute";
        case TallyMode::mc: return "mc";
    }
    return "?";
}

inline TallyMode tally_mode_from_string(const std::string& s) {
    if (s == "auto") return TallyMode::automatic;
    if (s == "brute") return TallyMode::brute;
    if (s == "mc") return TallyMode::mc;
    throw ValidationError("unknown tally mode '" + s + "' (auto|brute|mc)");
}

inline nlohmann::json to_json(const WeightScheme& ws) {
    struct Visitor {
        nlohmann::json operator()(const scheme::Unit&) const { return {{"type", "unit"}}; }
        nlohmann::json operator()(const scheme::Expert& s) const { return {{"type", "expert"}, {"threshold", s.threshold}}; }
        nlohmann::json operator()(const scheme::LogOdds& s) const { return {{"type", "log_odds"}, {"clamp", s.clamp}}; }
        nlohmann::json operator()(const scheme::BoundedPoly& s) const {
            return {{"type", "bounded_poly"}, {"W", s.max_weight}, {"k", s.k}};
        }
        nlohmann::json operator()(const scheme::Stochastic& s) const {
            return {{"type", "stochastic"}, {"W", s.max_weight}, {"k", s.k}, {"sigma", s.sigma}, {"bounds", to_string(s.bounds)}};
        }
    };
    return std::visit(Visitor{}, ws);
}

inline WeightScheme scheme_from_json(const nlohmann::json& doc) {
    try {
        const std::string type = doc.at("type").get<std::string>();
        WeightScheme ws;
        if (type == "unit")
            ws = scheme::Unit{};
        else if (type == "expert")
            ws = scheme::Expert{doc.value("threshold", 0.75)};
        else if (type == "log_odds")
            ws = scheme::LogOdds{doc.value("clamp", 1e-6)};
        else if (type == "bounded_poly")
            ws = scheme::BoundedPoly{doc.at("W").get<double>(), doc.at("k").get<int>()};
        else if (type == "stochastic") {
            const std::string bounds = doc.value("bounds", std::string("weight_range"));
            require(bounds == "weight_range" || bounds == "proportional", "scheme: bounds must be weight_range|proportional");
            ws = scheme::Stochastic{doc.at("W").get<double>(), doc.at("k").get<int>(), doc.at("sigma").get<double>(),
                                    bounds == "proportional" ? NoiseBounds::proportional : NoiseBounds::weight_range};
        } else
            throw ValidationError("scheme: unknown type '" + type + "'");
        validate(ws);
        return ws;
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("scheme document: ") + e.what());
    }
}

inline nlohmann::json to_json(const ExperimentConfig& c) {
    return {{"measure", to_json(c.measure)}, {"scheme", to_json(c.scheme)},   {"n_grid", c.n_grid},
            {"profiles_per_n", c.profiles_per_n}, {"tally_mode", to_string(c.tally_mode)}, {"replicas", c.replicas},
            {"seed", c.seed},     {"thresholds", {{"high", c.high}, {"low", c.low}}}};
}

inline std::uint64_t config_hash(const ExperimentConfig& c) { return fnv1a64(to_json(c).dump()); }

inline void validate(const ExperimentConfig& c) {
    require(!c.n_grid.empty(), "experiment: n_grid is empty");
    for (std::size_t i = 0; i < c.n_grid.size(); ++i) {
        require(c.n_grid[i] % 2 == 1, "experiment: n_grid entries must be odd");
        require(i == 0 || c.n_grid[i] > c.n_grid[i - 1], "experiment: n_grid must increase");
    }
    require(c.profiles_per_n >= 10, "experiment: profiles_per_n must be >= 10");
    require(c.high > c.low && c.low >= 0.0 && c.high <= 1.0, "experiment: thresholds must satisfy 0 <= low < high <= 1");
    validate(c.scheme);
}

inline ExperimentConfig experiment_from_json(const nlohmann::json& doc) {
    require(doc.is_object(), "experiment document must be an object");
    static const std::vector<std::string> known{"measure", "scheme",   "n_grid", "profiles_per_n",
                                                "tally_mode", "replicas", "seed",   "thresholds"};
    for (const auto& [key, value] : doc.items())
        require(std::find(known.begin(), known.end(), key) != known.end(), "experiment document: unknown key '" + key + "'");
    ExperimentConfig c;
    try {
        c.measure = measure_from_json(doc.at("measure"));
        if (doc.contains("scheme")) c.scheme = scheme_from_json(doc.at("scheme"));
        c.n_grid = doc.at("n_grid").get<std::vector<std::size_t>>();
        c.profiles_per_n = doc.value("profiles_per_n", std::size_t{100});
        c.tally_mode = tally_mode_from_string(doc.value("tally_mode", std::string("auto")));
        c.replicas = doc.value("replicas", std::uint64_t{10000});
        c.seed = doc.value("seed", std::uint64_t{0});
        if (doc.contains("thresholds")) {
            c.high = doc.at("thresholds").value("high", 0.99);
            c.low = doc.at("thresholds").value("low", 0.01);
        }
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("experiment document: ") + e.what());
    }
    validate(c);
    return c;
}

// ---------------------------------------------------------------------------

namespace detail {

inline double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

struct ProfileOutcome {
    double win = 0.0;
    std::optional<double> q;
    double drift = 0.0;
    TallyMethod method = TallyMethod::exact_dp;
    double half_width = 0.0;
};

}  // namespace detail

inline std::vector<double> realize_weights(const WeightScheme& ws, const std::vector<double>& p, std::uint64_t seed) {
    std::vector<double> w(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (is_stochastic(ws)) {
            auto rng = substream(seed, i);
            w[i] = sample_weight(ws, p[i], rng);
        } else {
            w[i] = deterministic_weight(ws, p[i]);
        }
    }
    return w;
}

inline ExperimentReport run(const ExperimentConfig& config) {
    validate(config);
    ExperimentReport report;
    report.config_hash = config_hash(config);
    report.seed = config.seed;
    const ProfileSource src = source::Iid{config.measure};
    const bool unit = is_unit(config.scheme);
    bool warned = false;

    for (std::size_t n : config.n_grid) {
        TallyMode mode = config.tally_mode;
        if (!unit && mode == TallyMode::brute && n > kMaxBruteVoters) {
            mode = TallyMode::mc;
            if (!warned) report.warnings.push_back("brute force infeasible for n > 25; rerouted to monte carlo");
            warned = true;
        }
        std::vector<detail::ProfileOutcome> outcomes(config.profiles_per_n);
        parallel_for(
            config.profiles_per_n,
            [&](std::size_t j) {
                const std::uint64_t profile_seed = substream_seed(substream_seed(config.seed, n), j);
                const Profile profile = generate(src, n, profile_seed);
                const auto& p = profile.competences;
                auto& out = outcomes[j];
                out.q = q_statistic(p);
                if (unit) {
                    out.win = majority_prob_exact(p).value;
                    double d = 0.0;
                    for (double x : p) d += 2.0 * x - 1.0;
                    out.drift = d / double(n);
                    return;
                }
                const auto w = realize_weights(config.scheme, p, substream_seed(profile_seed, 0x5745494748ULL));
                double d = 0.0;
                for (std::size_t i = 0; i < n; ++i) d += w[i] * (2.0 * p[i] - 1.0);
                out.drift = d / double(n);
                WeightedOptions opts{mode, config.replicas, substream_seed(profile_seed, 0x54414C4C59ULL), 1};
                const auto est = weighted_majority_prob(p, w, opts);
                out.win = est.value;
                out.method = est.method;
                out.half_width = est.half_width;
            },
            config.threads);

        ExperimentRow row;
        row.n = n;
        std::vector<double> wins;
        double q_sum = 0.0, drift_sum = 0.0;
        std::size_t q_count = 0, high = 0, low = 0;
        for (const auto& o : outcomes) {
            wins.push_back(o.win);
            if (o.win > config.high) ++high;
            if (o.win < config.low) ++low;
            if (o.q) {
                q_sum += *o.q;
                ++q_count;
            }
            drift_sum += o.drift;
            row.method = o.method;
            row.max_half_width = std::max(row.max_half_width, o.half_width);
        }
        const double count = double(outcomes.size());
        row.high_fraction = double(high) / count;
        row.low_fraction = double(low) / count;
        row.median_win = detail::median(wins);
        if (q_count > 0) row.mean_q = q_sum / double(q_count);
        row.drift_estimate = drift_sum / count;
        report.rows.push_back(row);
        report.win_probabilities.push_back(std::move(wins));
    }
    return report;
}

enum class Trend { cjp_like, anti_cjp_like, null_like };

inline std::string to_string(Trend t) {
    switch (t) {
        case Trend::cjp_like: return "cjp_like";
        case Trend::anti_cjp_like: return "anti_cjp_like";
        case Trend::null_like: return "null_like";
    }
    return "?";
}

inline Trend classify_trend(const ExperimentReport& report) {
    require(report.rows.size() >= 3, "classify_trend: need at least 3 rows");
    auto nondecreasing_to = [&](auto field) {
        for (std::size_t i = 1; i < report.rows.size(); ++i)
            if (field(report.rows[i]) < field(report.rows[i - 1])) return false;
        return field(report.rows.back()) >= 0.95;
    };
    if (nondecreasing_to([](const ExperimentRow& r) { return r.high_fraction; })) return Trend::cjp_like;
    if (nondecreasing_to([](const ExperimentRow& r) { return r.low_fraction; })) return Trend::anti_cjp_like;
    return Trend::null_like;
}

// ---------------------------------------------------------------------------

inline std::string report_csv(const ExperimentReport& r) {
    std::ostringstream os;
    os << provenance_line(r.seed, r.config_hash) << "\n";
    os << "n,high_fraction,low_fraction,median_win,mean_q,drift_estimate,method,max_half_width\n";
    for (const auto& row : r.rows) {
        os << row.n << ',' << fmt_full(row.high_fraction) << ',' << fmt_full(row.low_fraction) << ','
           << fmt_full(row.median_win) << ',' << fmt_opt(row.mean_q) << ',' << fmt_full(row.drift_estimate) << ','
           << to_string(row.method) << ',' << fmt_full(row.max_half_width) << "\n";
    }
    return os.str();
}

inline nlohmann::json report_json(const ExperimentReport& r) {
    nlohmann::json doc;
    doc["label"] = r.label;
    doc["seed"] = r.seed;
    doc["config_hash"] = hex64(r.config_hash);
    doc["warnings"] = r.warnings;
    doc["rows"] = nlohmann::json::array();
    for (const auto& row : r.rows) {
        doc["rows"].push_back({{"n", row.n},
                               {"high_fraction", row.high_fraction},
                               {"low_fraction", row.low_fraction},
                               {"median_win", row.median_win},
                               {"mean_q", row.mean_q ? nlohmann::json(*row.mean_q) : nlohmann::json(nullptr)},
                               {"drift_estimate", row.drift_estimate},
                               {"method", to_string(row.method)},
                               {"max_half_width", row.max_half_width}});
    }
    return doc;
}

inline std::string report_svg(const ExperimentReport& r, const std::string& title) {
    std::vector<double> x;
    ChartSeries high{"high fraction", "#1f77b4", {}}, low{"low fraction", "#d62728", {}};
    for (const auto& row : r.rows) {
        x.push_back(double(row.n));
        high.y.push_back(row.high_fraction);
        low.y.push_back(row.low_fraction);
    }
    return svg_line_chart(title, x, {high, low});
}

}  // namespace jurylab
