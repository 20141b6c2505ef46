#pragma once

// Output helpers shared by the CLI and the experiment driver: provenance hashing,
// number formatting, CSV framing and a minimal SVG polyline chart.

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <iomanip>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace jurylab {

inline std::uint64_t fnv1a64(const std::string& text) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    return h;
}

inline std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

/// Human tables: 6 significant digits.
inline std::string fmt6(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    std::ostringstream os;
    os << std::setprecision(6) << v;
    return os.str();
}

/// Machine output: shortest round-trip representation.
inline std::string fmt_full(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

inline std::string fmt_opt(const std::optional<double>& v) { return v ? fmt_full(*v) : "NA"; }

inline std::string provenance_line(std::uint64_t seed, std::uint64_t config_hash) {
    return "# seed=" + std::to_string(seed) + " config_hash=" + hex64(config_hash);
}

struct ChartSeries {
    std::string name;
    std::string color;
    std::vector<double> y;
};

/// Line chart over x (log-scaled when all x > 0 and the span exceeds a decade).
inline std::string svg_line_chart(const std::string& title, const std::vector<double>& x,
                                  const std::vector<ChartSeries>& series, double y_min = 0.0, double y_max = 1.0) {
    const double width = 640, height = 400, margin = 50;
    bool log_x = !x.empty() && x.front() > 0.0 && x.back() / x.front() > 10.0;
    auto tx = [&](double v) {
        double lo = log_x ? std::log10(x.front()) : x.front();
        double hi = log_x ? std::log10(x.back()) : x.back();
        double t = log_x ? std::log10(v) : v;
        double frac = hi > lo ? (t - lo) / (hi - lo) : 0.5;
        return margin + frac * (width - 2 * margin);
    };
    auto ty = [&](double v) { return height - margin - (v - y_min) / (y_max - y_min) * (height - 2 * margin); };
    std::ostringstream os;
    os << std::fixed << std::setprecision(2);
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">"
       << title << "</text>\n";
    os << "<line x1=\"" << margin << "\" y1=\"" << height - margin << "\" x2=\"" << width - margin << "\" y2=\""
       << height - margin << "\" stroke=\"black\"/>\n";
    os << "<line x1=\"" << margin << "\" y1=\"" << margin << "\" x2=\"" << margin << "\" y2=\"" << height - margin
       << "\" stroke=\"black\"/>\n";
    for (double v : x) {
        os << "<text x=\"" << tx(v) << "\" y=\"" << height - margin + 16
           << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"10\">" << fmt6(v) << "</text>\n";
    }
    for (double v : {y_min, 0.5 * (y_min + y_max), y_max}) {
        os << "<text x=\"" << margin - 6 << "\" y=\"" << ty(v) + 4
           << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">" << fmt6(v) << "</text>\n";
    }
    double legend_y = margin;
    for (const auto& s : series) {
        os << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"2\" points=\"";
        for (std::size_t i = 0; i < s.y.size() && i < x.size(); ++i) os << (i ? " " : "") << tx(x[i]) << "," << ty(s.y[i]);
        os << "\"/>\n";
        os << "<text x=\"" << width - margin - 4 << "\" y=\"" << legend_y
           << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\" fill=\"" << s.color << "\">" << s.name
           << "</text>\n";
        legend_y += 14;
    }
    os << "</svg>\n";
    return os.str();
}

}  // namespace jurylab
