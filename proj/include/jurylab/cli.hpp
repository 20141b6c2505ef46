#pragma once

// Command-line front end. run_cli() is the whole program minus process plumbing,
// so tests can drive it with an argument vector and string streams.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "divergence.hpp"
#include "error.hpp"
#include "experiment.hpp"
#include "measure.hpp"
#include "profile.hpp"
#include "report.hpp"
#include "tally.hpp"
#include "walk.hpp"
#include "weights.hpp"

namespace jurylab::cli {

// ---------------------------------------------------------------------------
// Argument parsing helpers.

inline double parse_double(const std::string& text, const std::string& what) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        throw ValidationError(what + ": cannot parse number '" + text + "'");
    }
    require(used == text.size(), what + ": trailing characters in '" + text + "'");
    return v;
}

inline std::vector<double> parse_list(const std::string& text, const std::string& what) {
    std::vector<double> out;
    std::string item;
    std::stringstream ss(text);
    while (std::getline(ss, item, ',')) {
        item.erase(0, item.find_first_not_of(" \t"));
        item.erase(item.find_last_not_of(" \t") + 1);
        if (!item.empty()) out.push_back(parse_double(item, what));
    }
    require(!out.empty(), what + ": empty list");
    return out;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path);
    require(static_cast<bool>(in), "cannot open '" + path + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

/// A JSON array, or numbers separated by commas and/or whitespace.
inline std::vector<double> read_vector_file(const std::string& path, const std::string& what) {
    const std::string text = read_file(path);
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '[') {
        try {
            return nlohmann::json::parse(text).get<std::vector<double>>();
        } catch (const nlohmann::json::exception& e) {
            throw ValidationError(what + " file: " + e.what());
        }
    }
    std::string flat = text;
    std::replace_if(flat.begin(), flat.end(), [](char c) { return std::isspace(static_cast<unsigned char>(c)); }, ',');
    return parse_list(flat, what);
}

/// Named shorthand, path to a JSON document, or the JSON document itself.
inline MeasureSpec resolve_measure(const std::string& arg) {
    if (auto named = named_measure(arg)) return *named;
    if (std::filesystem::exists(arg)) return measure_from_string(read_file(arg));
    if (!arg.empty() && arg.front() == '{') return measure_from_string(arg);
    throw ValidationError("unknown measure '" + arg + "' (lebesgue|coin|affine:b0|dirac:x|linear:c0,c1|file|json)");
}

/// iid:<measure> | condorcet:<eps> | moa:<fraction> | c1:<alpha> | c2:<bits> | explicit:<list or file>
inline ProfileSource resolve_source(const std::string& arg) {
    const auto colon = arg.find(':');
    require(colon != std::string::npos, "source must look like kind:argument, got '" + arg + "'");
    const std::string kind = arg.substr(0, colon), rest = arg.substr(colon + 1);
    auto make = [&]() -> ProfileSource {
        if (kind == "iid") return source::Iid{resolve_measure(rest)};
        if (kind == "condorcet") return source::Condorcet{parse_double(rest, "condorcet eps")};
        if (kind == "moa") return source::Moa{parse_double(rest, "moa fraction")};
        if (kind == "c1") return source::C1{parse_double(rest, "c1 alpha")};
        if (kind == "c2") {
            std::vector<int> prefix;
            for (char c : rest) {
                require(c == '0' || c == '1', "c2 prefix must be a string of 0/1 digits");
                prefix.push_back(c - '0');
            }
            return source::C2{prefix};
        }
        if (kind == "explicit")
            return source::Explicit{std::filesystem::exists(rest) ? read_vector_file(rest, "explicit profile")
                                                                  : parse_list(rest, "explicit profile")};
        throw ValidationError("unknown source kind '" + kind + "'");
    };
    const ProfileSource src = make();
    validate(src);
    return src;
}

inline void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path);
    require(static_cast<bool>(out), "cannot write '" + path.string() + "'");
    out << content;
}

inline std::string csv_header(const std::vector<std::string>& cols) {
    std::string s;
    for (std::size_t i = 0; i < cols.size(); ++i) s += (i ? "," : "") + cols[i];
    return s + "\n";
}

inline std::string pad(const std::string& s, std::size_t width) {
    return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

// ---------------------------------------------------------------------------
// Shared flags.

struct Common {
    std::uint64_t seed = 0;
    unsigned threads = 0;
    std::string out_dir;
};

inline void add_common(CLI::App* cmd, Common& c, bool with_out_dir) {
    cmd->add_option("--seed", c.seed, "Master seed (all randomness derives from it)")->capture_default_str();
    cmd->add_option("--threads", c.threads, "Worker cap (default: JURYLAB_THREADS, else hardware)");
    if (with_out_dir) cmd->add_option("--out-dir", c.out_dir, "Directory receiving CSV/JSON/SVG outputs");
}

inline void emit(std::ostream& out, const Common& c, const std::string& stem, const std::string& text,
                 const std::string& ext) {
    out << text;
    if (c.out_dir.empty()) return;
    std::filesystem::create_directories(c.out_dir);
    write_file(std::filesystem::path(c.out_dir) / (stem + "." + ext), text);
}

// ---------------------------------------------------------------------------
// Subcommands.

struct TallyArgs {
    std::string profile, profile_file, weights, weights_file, mode = "auto";
    std::uint64_t replicas = 10000;
};

inline int cmd_tally(const TallyArgs& a, const Common& c, std::ostream& out) {
    require(a.profile.empty() != a.profile_file.empty(), "tally: give exactly one of --profile / --profile-file");
    const auto p = a.profile.empty() ? read_vector_file(a.profile_file, "profile") : parse_list(a.profile, "profile");
    require(a.weights.empty() || a.weights_file.empty(), "tally: give at most one of --weights / --weights-file");
    std::optional<std::vector<double>> w;
    if (!a.weights.empty()) w = parse_list(a.weights, "weights");
    if (!a.weights_file.empty()) w = read_vector_file(a.weights_file, "weights");
    const TallyMode mode = tally_mode_from_string(a.mode);

    TallyEstimate est;
    if (!w && mode == TallyMode::automatic) {
        est = majority_prob_exact(p);
    } else {
        if (!w) {
            require(p.size() % 2 == 1, "tally: n must be odd for unit weights (ties are out of scope)");
            w = std::vector<double>(p.size(), 1.0);
        }
        est = weighted_majority_prob(p, *w, WeightedOptions{mode, a.replicas, c.seed, resolve_threads(c.threads)});
    }
    nlohmann::json doc{{"value", est.value},
                       {"method", to_string(est.method)},
                       {"half_width", est.half_width},
                       {"n_replicas", est.n_replicas},
                       {"tie_probability", est.tie_probability ? nlohmann::json(*est.tie_probability) : nlohmann::json(nullptr)},
                       {"n", p.size()},
                       {"seed", c.seed}};
    emit(out, c, "tally", doc.dump(2) + "\n", "json");
    return 0;
}

struct ConditionsArgs {
    std::string source;
    std::string checkpoints;
    std::size_t n0 = 1, n_max = 100001;
};

inline int cmd_conditions(const ConditionsArgs& a, const Common& c, std::ostream& out) {
    const ProfileSource src = resolve_source(a.source);
    std::vector<std::size_t> grid;
    if (!a.checkpoints.empty()) {
        for (double v : parse_list(a.checkpoints, "checkpoints")) {
            require(v >= 1 && v == std::floor(v), "checkpoints must be positive integers");
            grid.push_back(static_cast<std::size_t>(v));
        }
    } else {
        grid = geometric_checkpoints(a.n0, a.n_max);
    }
    const auto r = condition_report(src, grid, c.seed);
    std::ostringstream os;
    os << provenance_line(c.seed, fnv1a64(describe(src) + "|" + a.checkpoints + "|" + std::to_string(a.n0) + "|" +
                                               std::to_string(a.n_max)))
       << " label=" << r.label << "\n";
    os << csv_header({"checkpoint", "q_trace", "s_trace", "running_mean", "chebyshev_bound", "gen_cent", "gen_noconc",
                      "gen_eps1", "sigma_t"});
    for (std::size_t i = 0; i < r.checkpoints.size(); ++i) {
        os << r.checkpoints[i] << ',' << fmt_opt(r.q_trace[i]) << ',' << fmt_full(r.s_trace[i]) << ','
           << fmt_full(r.running_mean[i]) << ',' << fmt_opt(r.chebyshev_bounds[i]) << ',' << fmt_full(r.gen_cent[i])
           << ',' << fmt_full(r.gen_noconc[i]) << ',' << fmt_full(r.gen_eps1[i]) << ',' << fmt_full(r.sigma_t[i])
           << "\n";
    }
    emit(out, c, "conditions", os.str(), "csv");
    return 0;
}

struct SweepArgs {
    std::string measure = "lebesgue";
    std::string w_grid = "10,100", k_grid = "1,2,3", sigma_grid, bounds = "weight_range";
    double sigma_divisor = 50.0;
};

inline int cmd_weights_sweep(const SweepArgs& a, const Common& c, std::ostream& out) {
    const MeasureSpec spec = resolve_measure(a.measure);
    require(a.bounds == "weight_range" || a.bounds == "proportional", "--bounds must be weight_range|proportional");
    const NoiseBounds bounds = a.bounds == "proportional" ? NoiseBounds::proportional : NoiseBounds::weight_range;
    const auto ws = parse_list(a.w_grid, "W grid");
    const auto ks = parse_list(a.k_grid, "k grid");
    std::ostringstream os;
    os << provenance_line(c.seed, fnv1a64(to_json(spec).dump() + a.w_grid + a.k_grid + a.sigma_grid + a.bounds)) << "\n";
    os << csv_header({"W", "k", "sigma_W", "x", "moment_criterion", "drift"});
    for (double w : ws) {
        std::vector<double> sigmas =
            a.sigma_grid.empty() ? std::vector<double>{(w - 1.0) / a.sigma_divisor} : parse_list(a.sigma_grid, "sigma grid");
        for (double kd : ks) {
            require(kd >= 1 && kd == std::floor(kd), "k must be a positive integer");
            const int k = static_cast<int>(kd);
            for (double sigma : sigmas) {
                const scheme::Stochastic s{w, k, sigma, bounds};
                validate(WeightScheme{s});
                os << fmt_full(w) << ',' << k << ',' << fmt_full(sigma) << ',' << fmt_full(s.noise_ratio()) << ','
                   << fmt_full(moment_criterion(spec, k)) << ',' << fmt_full(drift(spec, s)) << "\n";
            }
        }
    }
    emit(out, c, "weights_sweep", os.str(), "csv");
    return 0;
}

struct WalkArgs {
    std::string mode;
    int m = 1, m_max = 0;
    bool csv = false;
    std::int64_t level = -1;
    std::string horizons = "10,100,1000,10000,100000";
    std::uint64_t replicas = 10000;
    std::string measure = "lebesgue";
    double eps0 = 0.1, eps = 0.05;
    std::uint64_t n = 10000, trials = 200;
};

inline int cmd_walk(const WalkArgs& a, const Common& c, std::ostream& out) {
    std::ostringstream os;
    if (a.mode == "border") {
        const int hi = std::max(a.m, a.m_max);
        if (a.csv) {
            os << provenance_line(c.seed, fnv1a64("border|" + std::to_string(a.m) + "|" + std::to_string(hi))) << "\n";
            os << csv_header({"m", "exact_num", "exact_den", "float", "asymptote", "ratio", "enumerated_match"});
        }
        for (int m = a.m; m <= hi; ++m) {
            const auto pc = border_measure(m);
            if (a.csv) {
                os << m << ',' << pc.numerator << ',' << pc.denominator << ',' << fmt_full(pc.value) << ','
                   << fmt_full(pc.asymptote()) << ',' << fmt_full(pc.ratio()) << ','
                   << (pc.enumerated ? (*pc.enumerated == pc.closed_form ? "yes" : "NO") : "NA") << "\n";
            } else {
                os << "m=" << m << ", exact=" << pc.numerator << "/" << pc.denominator << ", float=" << fmt6(pc.value)
                   << "\n";
            }
        }
        emit(out, c, "walk_border", os.str(), a.csv ? "csv" : "txt");
        return 0;
    }
    if (a.mode == "return") {
        std::vector<double> hs = parse_list(a.horizons, "horizons");
        std::sort(hs.begin(), hs.end());
        const auto horizon_max = static_cast<std::int64_t>(hs.back());
        require(horizon_max >= std::abs(a.level), "walk return: horizon must be >= |k|");
        require(a.replicas >= 100, "walk return: replicas must be >= 100");
        const auto times = first_passage_times(a.level, horizon_max, a.replicas, c.seed, resolve_threads(c.threads));
        os << provenance_line(c.seed, fnv1a64("return|" + std::to_string(a.level) + "|" + a.horizons + "|" +
                                                   std::to_string(a.replicas)))
           << "\n";
        os << csv_header({"k", "horizon", "estimate", "half_width", "replicas"});
        for (double hd : hs) {
            const auto h = static_cast<std::int64_t>(hd);
            require(h >= std::abs(a.level), "walk return: every horizon must be >= |k|");
            std::uint64_t hits = 0;
            for (auto t : times) hits += (t >= 0 && t <= h) ? 1 : 0;
            const auto e = proportion(hits, a.replicas);
            os << a.level << ',' << h << ',' << fmt_full(e.value) << ',' << fmt_full(e.half_width) << ',' << e.trials
               << "\n";
        }
        emit(out, c, "walk_return", os.str(), "csv");
        return 0;
    }
    if (a.mode == "moa") {
        const MeasureSpec spec = resolve_measure(a.measure);
        const auto e = moa_fraction_experiment(spec, a.eps0, a.eps, a.n, a.trials, c.seed, resolve_threads(c.threads));
        os << provenance_line(c.seed, fnv1a64("moa|" + to_json(spec).dump() + "|" + fmt_full(a.eps0) + "|" +
                                                   fmt_full(a.eps) + "|" + std::to_string(a.n) + "|" +
                                                   std::to_string(a.trials)))
           << "\n";
        os << csv_header({"eps0", "eps", "n", "interval_mass", "estimate", "half_width", "trials"});
        os << fmt_full(a.eps0) << ',' << fmt_full(a.eps) << ',' << a.n << ','
           << fmt_full(interval_mass(spec, 1.0 - a.eps0, 1.0)) << ',' << fmt_full(e.value) << ','
           << fmt_full(e.half_width) << ',' << e.trials << "\n";
        emit(out, c, "walk_moa", os.str(), "csv");
        return 0;
    }
    throw ValidationError("walk: mode must be border|return|moa");
}

struct DivergenceArgs {
    std::string p, q;
    int order = 20;
};

inline int cmd_divergence(const DivergenceArgs& a, const Common& c, std::ostream& out) {
    const auto p = resolve_measure(a.p), q = resolve_measure(a.q);
    const auto r = divergences(p, q, DivergenceOptions{a.order});
    nlohmann::json doc{{"tv", r.tv},
                       {"kl", r.kl},
                       {"hellinger_affinity", r.hellinger_affinity},
                       {"hellinger_distance", r.hellinger_distance},
                       {"bhattacharyya", r.bhattacharyya}};
    emit(out, c, "divergence", doc.dump(2) + "\n", "json");
    return 0;
}

inline void write_experiment(const ExperimentReport& r, const Common& c, const std::string& stem,
                             const std::string& title) {
    if (c.out_dir.empty()) return;
    std::filesystem::create_directories(c.out_dir);
    const std::filesystem::path dir(c.out_dir);
    write_file(dir / (stem + ".csv"), report_csv(r));
    write_file(dir / (stem + ".json"), report_json(r).dump(2) + "\n");
    write_file(dir / (stem + ".svg"), report_svg(r, title));
}

struct ExperimentArgs {
    std::string config;
    bool json = false;
};

inline int cmd_experiment(const ExperimentArgs& a, const Common& c, std::ostream& out, std::ostream& err,
                          bool seed_given) {
    ExperimentConfig cfg = experiment_from_json([&] {
        try {
            return nlohmann::json::parse(read_file(a.config));
        } catch (const nlohmann::json::exception& e) {
            throw ValidationError(std::string("experiment config: ") + e.what());
        }
    }());
    if (seed_given) cfg.seed = c.seed;
    cfg.threads = resolve_threads(c.threads);
    const auto r = run(cfg);
    for (const auto& w : r.warnings) err << "warning: " << w << "\n";
    out << (a.json ? report_json(r).dump(2) + "\n" : report_csv(r));
    write_experiment(r, c, "experiment", "high/low win-probability fractions vs n");
    return 0;
}

// ---------------------------------------------------------------------------
// Named reproductions.

struct ReproduceArgs {
    std::string scenario;
    std::size_t profiles = 0;  // 0: scenario default
    std::uint64_t replicas = 10000;
};

inline void print_experiment_table(std::ostream& os, const ExperimentReport& r) {
    os << pad("n", 8) << pad("high_frac", 12) << pad("low_frac", 12) << pad("median_win", 14) << pad("mean_Q", 12)
       << pad("drift", 12) << "method\n";
    for (const auto& row : r.rows) {
        os << pad(std::to_string(row.n), 8) << pad(fmt6(row.high_fraction), 12) << pad(fmt6(row.low_fraction), 12)
           << pad(fmt6(row.median_win), 14) << pad(row.mean_q ? fmt6(*row.mean_q) : "NA", 12)
           << pad(fmt6(row.drift_estimate), 12) << to_string(row.method) << "\n";
    }
}

inline ExperimentConfig iid_config(MeasureSpec measure, std::size_t profiles, const Common& c) {
    ExperimentConfig cfg;
    cfg.measure = std::move(measure);
    cfg.n_grid = {101, 1001, 10001};
    cfg.profiles_per_n = profiles;
    cfg.seed = c.seed;
    cfg.threads = resolve_threads(c.threads);
    return cfg;
}

inline int cmd_reproduce(const ReproduceArgs& a, const Common& c, std::ostream& out) {
    std::ostringstream os;
    const auto n_profiles = [&](std::size_t dflt) { return a.profiles ? a.profiles : dflt; };
    auto experiment_scenario = [&](const std::string& stem, const std::string& heading, MeasureSpec m,
                                   std::size_t profiles) {
        const auto cfg = iid_config(std::move(m), n_profiles(profiles), c);
        const auto r = run(cfg);
        os << heading << " (" << r.label << ")\n" << provenance_line(r.seed, r.config_hash) << "\n";
        print_experiment_table(os, r);
        os << "trend: " << to_string(classify_trend(r)) << "\n";
        write_experiment(r, c, stem, heading);
    };

    if (a.scenario == "shapley-grofman") {
        const std::vector<double> p{0.9, 0.9, 0.6, 0.6, 0.6};
        const std::vector<std::pair<std::string, std::vector<double>>> rules{
            {"expert", {1, 0, 0, 0, 0}},
            {"simple", {1, 1, 1, 1, 1}},
            {"weighted", {1.0 / 3, 1.0 / 3, 1.0 / 9, 1.0 / 9, 1.0 / 9}}};
        os << "profile 0.9,0.9,0.6,0.6,0.6 (exact enumeration)\n";
        os << pad("rule", 10) << pad("win_prob", 12) << "tie_prob\n";
        for (const auto& [name, w] : rules) {
            const auto e = weighted_majority_brute(p, w);
            os << pad(name, 10) << pad(fmt6(e.value), 12) << fmt6(e.tie_probability.value_or(0.0)) << "\n";
        }
        out << os.str();
        return 0;
    }
    if (a.scenario == "theorem-3-2") {
        experiment_scenario("theorem_3_2", "centered measure: lebesgue iid, unit weights", lebesgue(), 200);
    } else if (a.scenario == "theorem-3-7") {
        experiment_scenario("theorem_3_7", "biased measure: affine b0=1 iid, unit weights", affine_measure(1.0), 100);
    } else if (a.scenario == "anti-cjp") {
        experiment_scenario("anti_cjp", "negatively biased measure: affine b0=-1 iid, unit weights",
                            affine_measure(-1.0), 100);
    } else if (a.scenario == "theorem-4-3") {
        const MeasureSpec m = linear_density(2.0, -2.0, "2(1-x)");
        const auto k = find_k(m, 20);
        require(k.has_value(), "no k with positive moment criterion");
        const double w_max = 100.0;
        const scheme::Stochastic s{w_max, k->k, (w_max - 1.0) / 50.0};
        os << "stochastic weights on density 2(1-x): bias=" << fmt6(bias(m)) << " mass_above_half="
           << fmt6(interval_mass(m, 0.5, 1.0)) << " k=" << k->k << " W=" << fmt6(w_max) << " sigma=" << fmt6(s.sigma)
           << " x=" << fmt6(s.noise_ratio()) << "\n";
        os << "closed-form drift: " << fmt6(drift(m, s)) << "\n";
        auto cfg = iid_config(m, n_profiles(10), c);
        cfg.scheme = s;
        cfg.tally_mode = TallyMode::mc;
        cfg.replicas = a.replicas;
        const auto r = run(cfg);
        os << "stochastic weights (" << r.label << ")\n" << provenance_line(r.seed, r.config_hash) << "\n";
        print_experiment_table(os, r);
        os << "trend: " << to_string(classify_trend(r)) << "\n";
        write_experiment(r, c, "theorem_4_3", "stochastic weights, density 2(1-x)");
        auto unit_cfg = iid_config(m, n_profiles(10), c);
        const auto u = run(unit_cfg);
        os << "contrast: unit weights\n" << provenance_line(u.seed, u.config_hash) << "\n";
        print_experiment_table(os, u);
        os << "trend: " << to_string(classify_trend(u)) << "\n";
        write_experiment(u, c, "theorem_4_3_unit", "unit weights, density 2(1-x)");
    } else if (a.scenario == "catalan-border") {
        os << pad("m", 8) << pad("exact", 24) << pad("float", 14) << pad("sqrt(pi m)*value", 18) << "enumerated\n";
        for (int m : {1, 2, 3, 4, 5, 6, 8, 10, 12, 100, 1000, 10000}) {
            const auto pc = border_measure(m);
            std::ostringstream frac;
            frac << pc.numerator << "/" << pc.denominator;
            std::string exact = frac.str();
            if (exact.size() > 22) exact = "(big)";
            os << pad(std::to_string(m), 8) << pad(exact, 24) << pad(fmt6(pc.value), 14) << pad(fmt6(pc.ratio()), 18)
               << (pc.enumerated ? (*pc.enumerated == pc.closed_form ? "match" : "MISMATCH") : "-") << "\n";
        }
        bool ok = true;
        for (int m = 1; m <= 30; ++m) ok = ok && border_partial_sum(m) == border_measure(m, false).closed_form;
        os << "partial-sum identity m<=30: " << (ok ? "holds" : "FAILS") << "\n";
    } else if (a.scenario == "moa") {
        const MeasureSpec m = lebesgue();
        os << "informed-fraction frequency, lebesgue iid, eps0=0.1, n=10000\n";
        os << pad("eps", 8) << pad("mass", 10) << pad("estimate", 12) << "half_width\n";
        for (double eps : {0.05, 0.2}) {
            const auto e = moa_fraction_experiment(m, 0.1, eps, 10000, n_profiles(200), c.seed, resolve_threads(c.threads));
            os << pad(fmt6(eps), 8) << pad(fmt6(interval_mass(m, 0.9, 1.0)), 10) << pad(fmt6(e.value), 12)
               << fmt6(e.half_width) << "\n";
        }
    } else {
        throw ValidationError("unknown scenario '" + a.scenario + "'");
    }
    out << os.str();
    return 0;
}

// ---------------------------------------------------------------------------

inline const std::vector<std::string>& scenarios() {
    static const std::vector<std::string> names{"shapley-grofman", "theorem-3-2", "theorem-3-7", "anti-cjp",
                                                "theorem-4-3",     "catalan-border", "moa"};
    return names;
}

/// Exit codes: 0 success, 1 invalid input, 2 numeric failure.
inline int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"jurylab: Condorcet jury computations and desk-scale experiments", "jurylab"};
    app.require_subcommand(1);
    Common common;

    TallyArgs tally;
    auto* t = app.add_subcommand("tally", "Majority win probability of a competence profile");
    t->add_option("--profile", tally.profile, "Comma-separated competences");
    t->add_option("--profile-file", tally.profile_file, "File with competences (JSON array or whitespace list)");
    t->add_option("--weights", tally.weights, "Comma-separated weights (default: unit)");
    t->add_option("--weights-file", tally.weights_file, "File with weights");
    t->add_option("--mode", tally.mode, "auto|brute|mc")->capture_default_str();
    t->add_option("--replicas", tally.replicas, "Monte Carlo replicas")->capture_default_str();
    add_common(t, common, true);

    ConditionsArgs cond;
    auto* co = app.add_subcommand("conditions", "Finite-horizon traces of the sufficient conditions");
    co->add_option("--source", cond.source, "iid:<measure>|condorcet:<eps>|moa:<f>|c1:<alpha>|c2:<bits>|explicit:<list>")
        ->required();
    co->add_option("--checkpoints", cond.checkpoints, "Comma-separated odd checkpoints");
    co->add_option("--n0", cond.n0, "First geometric checkpoint")->capture_default_str();
    co->add_option("--n-max", cond.n_max, "Last checkpoint")->capture_default_str();
    add_common(co, common, true);

    SweepArgs sweep;
    auto* sw = app.add_subcommand("weights-sweep", "Moment criterion and closed-form drift over a (W, k, sigma) grid");
    sw->add_option("--measure", sweep.measure, "Measure name, JSON file or inline JSON")->capture_default_str();
    sw->add_option("--W", sweep.w_grid, "Comma-separated W values")->capture_default_str();
    sw->add_option("--k", sweep.k_grid, "Comma-separated exponents")->capture_default_str();
    sw->add_option("--sigma", sweep.sigma_grid, "Comma-separated sigma_W values (default (W-1)/divisor)");
    sw->add_option("--sigma-divisor", sweep.sigma_divisor, "sigma_W = (W-1)/divisor when --sigma is absent")
        ->capture_default_str();
    sw->add_option("--bounds", sweep.bounds, "weight_range|proportional")->capture_default_str();
    add_common(sw, common, true);

    WalkArgs walk;
    auto* wk = app.add_subcommand("walk", "Border-set combinatorics and random-walk experiments");
    wk->add_option("mode", walk.mode, "border|return|moa")->required();
    wk->add_option("--m", walk.m, "border: first m")->capture_default_str();
    wk->add_option("--m-max", walk.m_max, "border: last m (default: --m)");
    wk->add_flag("--csv", walk.csv, "border: CSV instead of text lines");
    wk->add_option("--k", walk.level, "return: target level")->capture_default_str();
    wk->add_option("--horizons", walk.horizons, "return: comma-separated horizons")->capture_default_str();
    wk->add_option("--replicas", walk.replicas, "return: replicas")->capture_default_str();
    wk->add_option("--measure", walk.measure, "moa: competence measure")->capture_default_str();
    wk->add_option("--eps0", walk.eps0, "moa: informed interval is [1-eps0, 1]")->capture_default_str();
    wk->add_option("--eps", walk.eps, "moa: required informed fraction")->capture_default_str();
    wk->add_option("--n", walk.n, "moa: electorate size")->capture_default_str();
    wk->add_option("--trials", walk.trials, "moa: sampled profiles")->capture_default_str();
    add_common(wk, common, true);

    DivergenceArgs div;
    auto* dv = app.add_subcommand("divergence", "TV, KL and Hellinger quantities between two measures");
    dv->add_option("--p", div.p, "First measure")->required();
    dv->add_option("--q", div.q, "Second measure")->required();
    dv->add_option("--order", div.order, "Gauss-Legendre order")->capture_default_str();
    add_common(dv, common, true);

    ExperimentArgs exp;
    auto* ex = app.add_subcommand("experiment", "Sampled-profile experiment from a JSON config");
    ex->add_option("--config", exp.config, "Experiment config document")->required();
    ex->add_flag("--json", exp.json, "Print JSON instead of CSV");
    add_common(ex, common, true);

    ReproduceArgs rep;
    auto* rp = app.add_subcommand("reproduce", "Named reproduction scenario");
    rp->add_option("scenario", rep.scenario, "Scenario name")->required()->check(CLI::IsMember(scenarios()));
    rp->add_option("--profiles", rep.profiles, "Override profiles (or trials) per row");
    rp->add_option("--replicas", rep.replicas, "Monte Carlo replicas")->capture_default_str();
    add_common(rp, common, true);

    try {
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }

    try {
        if (*t) return cmd_tally(tally, common, out);
        if (*co) return cmd_conditions(cond, common, out);
        if (*sw) return cmd_weights_sweep(sweep, common, out);
        if (*wk) return cmd_walk(walk, common, out);
        if (*dv) return cmd_divergence(div, common, out);
        if (*ex) return cmd_experiment(exp, common, out, err, ex->count("--seed") > 0);
        if (*rp) return cmd_reproduce(rep, common, out);
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const NumericError& e) {
        err << "numeric failure: " << e.what() << "\n";
        return 2;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "internal failure: " << e.what() << "\n";
        return 2;
    }
    return 1;
}

}  // namespace jurylab::cli
