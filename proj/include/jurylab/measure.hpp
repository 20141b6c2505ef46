#pragma once

// Probability measures on [0,1]: a piecewise-affine density plus finitely many atoms.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "error.hpp"
#include "rng.hpp"

namespace jurylab {

inline constexpr double kMassTolerance = 1e-12;

/// Density c0 + c1*x on [lo, hi].
struct DensityPiece {
    double lo = 0.0;
    double hi = 1.0;
    double c0 = 1.0;
    double c1 = 0.0;

    double density(double x) const { return c0 + c1 * x; }

    /// Integral of x^i * density over [a, b] intersected with the piece.
    double weighted_integral(int i, double a, double b) const {
        a = std::max(a, lo);
        b = std::min(b, hi);
        if (!(b > a)) return 0.0;
        const double e1 = i + 1.0, e2 = i + 2.0;
        return c0 * (std::pow(b, e1) - std::pow(a, e1)) / e1 + c1 * (std::pow(b, e2) - std::pow(a, e2)) / e2;
    }

    double mass() const { return weighted_integral(0, lo, hi); }

    bool operator==(const DensityPiece&) const = default;
};

struct Atom {
    double location = 0.0;
    double mass = 0.0;

    bool operator==(const Atom&) const = default;
};

class MeasureSpec {
public:
    MeasureSpec(std::vector<DensityPiece> pieces, std::vector<Atom> atoms, std::string label = {})
        : pieces_(std::move(pieces)), atoms_(std::move(atoms)), label_(std::move(label)) {
        validate();
    }

    const std::vector<DensityPiece>& pieces() const { return pieces_; }
    const std::vector<Atom>& atoms() const { return atoms_; }
    const std::string& label() const { return label_; }

    double continuous_mass() const {
        double m = 0.0;
        for (const auto& p : pieces_) m += p.mass();
        return m;
    }

    double atom_mass_total() const {
        double m = 0.0;
        for (const auto& a : atoms_) m += a.mass;
        return m;
    }

    /// Density of the absolutely continuous part at x (0 outside every piece).
    /// At a shared breakpoint the right-hand piece wins.
    double density(double x) const {
        double value = 0.0;
        for (const auto& p : pieces_) {
            if (x >= p.lo && x <= p.hi) value = p.density(x);
        }
        return value;
    }

    /// Atom mass at exactly x.
    double atom_at(double x) const {
        for (const auto& a : atoms_)
            if (a.location == x) return a.mass;
        return 0.0;
    }

    bool operator==(const MeasureSpec& other) const {
        return pieces_ == other.pieces_ && atoms_ == other.atoms_;
    }

private:
    void validate() const {
        double prev_hi = 0.0;
        for (std::size_t k = 0; k < pieces_.size(); ++k) {
            const auto& p = pieces_[k];
            require(std::isfinite(p.lo) && std::isfinite(p.hi) && std::isfinite(p.c0) && std::isfinite(p.c1),
                    "measure: non-finite density piece");
            require(p.lo >= 0.0 && p.hi <= 1.0 && p.lo < p.hi, "measure: piece interval must satisfy 0 <= lo < hi <= 1");
            require(k == 0 || p.lo >= prev_hi, "measure: pieces must be ordered and non-overlapping");
            require(p.density(p.lo) >= -kMassTolerance && p.density(p.hi) >= -kMassTolerance,
                    "measure: density negative on [" + std::to_string(p.lo) + ", " + std::to_string(p.hi) + "]");
            prev_hi = p.hi;
        }
        for (std::size_t k = 0; k < atoms_.size(); ++k) {
            const auto& a = atoms_[k];
            require(std::isfinite(a.location) && a.location >= 0.0 && a.location <= 1.0,
                    "measure: atom location outside [0,1]");
            require(std::isfinite(a.mass) && a.mass >= 0.0 && a.mass <= 1.0, "measure: atom mass outside [0,1]");
            for (std::size_t j = 0; j < k; ++j)
                require(atoms_[j].location != a.location, "measure: duplicate atom location");
        }
        const double total = continuous_mass() + atom_mass_total();
        require(std::abs(total - 1.0) <= kMassTolerance,
                "measure: total mass " + std::to_string(total) + " differs from 1");
    }

    std::vector<DensityPiece> pieces_;
    std::vector<Atom> atoms_;
    std::string label_;
};

// ---------------------------------------------------------------------------
// Families used throughout.

inline MeasureSpec lebesgue() { return MeasureSpec({{0.0, 1.0, 1.0, 0.0}}, {}, "lebesgue"); }

/// Affine density (1 - b0/2) + b0*x, b0 in [-2, 2]; its first moment is 1/2 + b0/12.
inline MeasureSpec affine_measure(double b0) {
    require(b0 >= -2.0 && b0 <= 2.0, "affine measure: b0 must lie in [-2, 2]");
    std::ostringstream label;
    label << "affine(b0=" << b0 << ")";
    return MeasureSpec({{0.0, 1.0, 1.0 - b0 / 2.0, b0}}, {}, label.str());
}

/// Density c0 + c1*x on all of [0,1].
inline MeasureSpec linear_density(double c0, double c1, std::string label = "linear") {
    return MeasureSpec({{0.0, 1.0, c0, c1}}, {}, std::move(label));
}

inline MeasureSpec dirac(double x) {
    return MeasureSpec({}, {{x, 1.0}}, "dirac(" + std::to_string(x) + ")");
}

inline MeasureSpec atomic(std::vector<Atom> atoms, std::string label = "atomic") {
    return MeasureSpec({}, std::move(atoms), std::move(label));
}

/// Push-forward under x -> 1 - x.
inline MeasureSpec reflect(const MeasureSpec& spec) {
    std::vector<DensityPiece> pieces;
    for (auto it = spec.pieces().rbegin(); it != spec.pieces().rend(); ++it)
        pieces.push_back({1.0 - it->hi, 1.0 - it->lo, it->c0 + it->c1, -it->c1});
    std::vector<Atom> atoms;
    for (auto it = spec.atoms().rbegin(); it != spec.atoms().rend(); ++it) atoms.push_back({1.0 - it->location, it->mass});
    return MeasureSpec(std::move(pieces), std::move(atoms), "reflect(" + spec.label() + ")");
}

// ---------------------------------------------------------------------------
// Operations.

/// i-th raw moment, closed form.
inline double moment(const MeasureSpec& spec, int i) {
    require(i >= 1, "moment: order must be >= 1");
    double m = 0.0;
    for (const auto& p : spec.pieces()) m += p.weighted_integral(i, p.lo, p.hi);
    for (const auto& a : spec.atoms()) m += a.mass * std::pow(a.location, i);
    return m;
}

inline double bias(const MeasureSpec& spec) { return moment(spec, 1) - 0.5; }

/// Mass of the closed interval [lo, hi], atoms at the endpoints included.
inline double interval_mass(const MeasureSpec& spec, double lo, double hi) {
    require(lo <= hi, "interval_mass: lo > hi");
    require(lo >= 0.0 && hi <= 1.0, "interval_mass: interval must lie in [0,1]");
    double m = 0.0;
    for (const auto& p : spec.pieces()) m += p.weighted_integral(0, lo, hi);
    for (const auto& a : spec.atoms())
        if (a.location >= lo && a.location <= hi) m += a.mass;
    return std::clamp(m, 0.0, 1.0);
}

inline double atom_mass(const MeasureSpec& spec, double x) { return interval_mass(spec, x, x); }

/// F(x) = mass of [0, x].
inline double cdf(const MeasureSpec& spec, double x) {
    if (x < 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    return interval_mass(spec, 0.0, x);
}

/// One draw by inversion: a single uniform picks atom vs continuous part by their
/// total masses, then either the atom or the point solving the piecewise-quadratic CDF.
template <class Engine>
double sample(const MeasureSpec& spec, Engine& rng) {
    double u = uniform01(rng);
    const double atoms_total = spec.atom_mass_total();
    if (u < atoms_total || spec.pieces().empty()) {
        double acc = 0.0;
        for (const auto& a : spec.atoms()) {
            acc += a.mass;
            if (u < acc) return a.location;
        }
        return spec.atoms().back().location;
    }
    double r = u - atoms_total;
    for (std::size_t k = 0; k < spec.pieces().size(); ++k) {
        const auto& p = spec.pieces()[k];
        const double m = p.mass();
        if (r < m || k + 1 == spec.pieces().size()) {
            r = std::min(r, m);
            // c1/2 t^2 + d0 t = r with t = x - lo; root in the cancellation-free form
            const double d0 = p.density(p.lo);
            const double disc = std::max(0.0, d0 * d0 + 2.0 * p.c1 * r);
            const double denom = d0 + std::sqrt(disc);
            const double t = denom > 0.0 ? 2.0 * r / denom : 0.0;
            return std::clamp(p.lo + t, p.lo, p.hi);
        }
        r -= m;
    }
    return spec.pieces().back().hi;
}

// ---------------------------------------------------------------------------
// Structured-document serialization.

inline nlohmann::json to_json(const MeasureSpec& spec) {
    nlohmann::json doc;
    doc["label"] = spec.label();
    doc["pieces"] = nlohmann::json::array();
    for (const auto& p : spec.pieces()) doc["pieces"].push_back({p.lo, p.hi, p.c0, p.c1});
    doc["atoms"] = nlohmann::json::array();
    for (const auto& a : spec.atoms()) doc["atoms"].push_back({a.location, a.mass});
    return doc;
}

inline MeasureSpec measure_from_json(const nlohmann::json& doc) {
    require(doc.is_object(), "measure document must be an object");
    std::vector<DensityPiece> pieces;
    std::vector<Atom> atoms;
    try {
        if (doc.contains("pieces")) {
            for (const auto& row : doc.at("pieces")) {
                require(row.is_array() && row.size() == 4, "measure: each piece must be [x_lo, x_hi, c0, c1]");
                pieces.push_back({row[0].get<double>(), row[1].get<double>(), row[2].get<double>(), row[3].get<double>()});
            }
        }
        if (doc.contains("atoms")) {
            for (const auto& row : doc.at("atoms")) {
                require(row.is_array() && row.size() == 2, "measure: each atom must be [x, mass]");
                atoms.push_back({row[0].get<double>(), row[1].get<double>()});
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("measure document: ") + e.what());
    }
    for (const auto& [key, value] : doc.items()) {
        require(key == "pieces" || key == "atoms" || key == "label", "measure document: unknown key '" + key + "'");
    }
    return MeasureSpec(std::move(pieces), std::move(atoms), doc.value("label", std::string{}));
}

inline MeasureSpec measure_from_string(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("measure document: ") + e.what());
    }
    return measure_from_json(doc);
}

/// Named shorthands accepted wherever a measure is expected on the command line.
/// lebesgue | affine:<b0> | dirac:<x> | coin (1/2 delta0 + 1/2 delta1) | linear:<c0>,<c1>
inline std::optional<MeasureSpec> named_measure(const std::string& name) {
    auto arg = [&](std::size_t prefix) { return name.substr(prefix); };
    try {
        if (name == "lebesgue" || name == "uniform") return lebesgue();
        if (name == "coin") return atomic({{0.0, 0.5}, {1.0, 0.5}}, "coin");
        if (name.rfind("affine:", 0) == 0) return affine_measure(std::stod(arg(7)));
        if (name.rfind("dirac:", 0) == 0) return dirac(std::stod(arg(6)));
        if (name.rfind("linear:", 0) == 0) {
            auto rest = arg(7);
            auto comma = rest.find(',');
            require(comma != std::string::npos, "linear:<c0>,<c1> expected");
            return linear_density(std::stod(rest.substr(0, comma)), std::stod(rest.substr(comma + 1)), name);
        }
    } catch (const std::logic_error& e) {
        if (auto* v = dynamic_cast<const ValidationError*>(&e)) throw *v;
        throw ValidationError("cannot parse measure '" + name + "'");
    }
    return std::nullopt;
}

}  // namespace jurylab
