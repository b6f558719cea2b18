#pragma once

// Minimal standalone SVG emission: grid heatmaps, step histograms and
// class-colored scatters. No plotting runtime, just shapes and text.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "primefreq/errors.hpp"

namespace primefreq::svg {

struct Series {
    std::string name;
    std::string color;
    std::vector<double> values; // one value per bin/step
};

namespace detail {

inline std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3f", v);
    return buf;
}

// Dark-blue to yellow ramp over t in [0, 1].
inline std::string ramp_color(double t) {
    t = std::clamp(t, 0.0, 1.0);
    const int r = static_cast<int>(20 + t * (253 - 20));
    const int g = static_cast<int>(30 + t * (231 - 30));
    const int b = static_cast<int>(90 + t * (37 - 90));
    char buf[16];
    std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", r, g, b);
    return buf;
}

inline std::ofstream open(const std::string& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw io_error("cannot open SVG for writing: " + path);
    return out;
}

inline void header(std::ostream& out, double w, double h) {
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\""
        << h << "\" viewBox=\"0 0 " << w << ' ' << h << "\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
}

inline void text(std::ostream& out, double x, double y, const std::string& s,
                 double size = 12, const std::string& anchor = "start") {
    out << "<text x=\"" << num(x) << "\" y=\"" << num(y) << "\" font-size=\"" << size
        << "\" font-family=\"sans-serif\" text-anchor=\"" << anchor << "\">" << s
        << "</text>\n";
}

} // namespace detail

/// Color grid of values with row/column labels and a min/max legend.
/// NaN cells (undefined metrics) render gray.
inline void write_heatmap(const std::string& path, const std::string& title,
                          const Eigen::MatrixXd& values,
                          const std::vector<std::string>& row_labels,
                          const std::vector<std::string>& col_labels) {
    const double cell = 48, left = 86, top = 56, legend = 54;
    const double w = left + cell * static_cast<double>(values.cols()) + 20;
    const double h = top + cell * static_cast<double>(values.rows()) + legend;
    auto out = detail::open(path);
    detail::header(out, w, h);
    detail::text(out, w / 2, 24, title, 14, "middle");

    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (Eigen::Index i = 0; i < values.size(); ++i) {
        const double v = values(i);
        if (std::isfinite(v)) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    }
    if (!std::isfinite(lo)) { lo = 0; hi = 1; }
    const double span = hi > lo ? hi - lo : 1.0;

    for (Eigen::Index r = 0; r < values.rows(); ++r) {
        for (Eigen::Index c = 0; c < values.cols(); ++c) {
            const double v = values(r, c);
            const std::string fill =
                std::isfinite(v) ? detail::ramp_color((v - lo) / span) : "#bbbbbb";
            out << "<rect x=\"" << detail::num(left + cell * static_cast<double>(c))
                << "\" y=\"" << detail::num(top + cell * static_cast<double>(r))
                << "\" width=\"" << cell << "\" height=\"" << cell << "\" fill=\"" << fill
                << "\" stroke=\"white\"/>\n";
            if (std::isfinite(v)) {
                char buf[32];
                std::snprintf(buf, sizeof(buf), "%.3g", v);
                detail::text(out, left + cell * (static_cast<double>(c) + 0.5),
                             top + cell * (static_cast<double>(r) + 0.6), buf, 9, "middle");
            }
        }
    }
    for (std::size_t r = 0; r < row_labels.size(); ++r) {
        detail::text(out, left - 8, top + cell * (static_cast<double>(r) + 0.6),
                     row_labels[r], 11, "end");
    }
    for (std::size_t c = 0; c < col_labels.size(); ++c) {
        detail::text(out, left + cell * (static_cast<double>(c) + 0.5), top - 8,
                     col_labels[c], 11, "middle");
    }
    detail::text(out, left, h - 18,
                 "min " + detail::num(lo) + "   max " + detail::num(hi), 11);
    out << "</svg>\n";
}

/// Overlaid step curves over a shared x interval, e.g. log-density of
/// similarity histograms, with a small legend.
inline void write_step_histogram(const std::string& path, const std::string& title,
                                 double x_min, double x_max,
                                 const std::vector<Series>& series,
                                 const std::string& y_label = "") {
    const double w = 560, h = 360, left = 64, right = 20, top = 48, bottom = 44;
    auto out = detail::open(path);
    detail::header(out, w, h);
    detail::text(out, w / 2, 22, title, 14, "middle");

    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const auto& s : series) {
        for (double v : s.values) {
            if (std::isfinite(v)) {
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
        }
    }
    if (!std::isfinite(lo)) { lo = 0; hi = 1; }
    if (hi == lo) hi = lo + 1;

    const double plot_w = w - left - right, plot_h = h - top - bottom;
    auto px = [&](double frac) { return left + frac * plot_w; };
    auto py = [&](double v) { return top + (hi - v) / (hi - lo) * plot_h; };

    out << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << plot_w
        << "\" height=\"" << plot_h << "\" fill=\"none\" stroke=\"#444\"/>\n";

    for (std::size_t si = 0; si < series.size(); ++si) {
        const auto& s = series[si];
        if (s.values.empty()) continue;
        const double step = 1.0 / static_cast<double>(s.values.size());
        out << "<polyline fill=\"none\" stroke=\"" << s.color
            << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < s.values.size(); ++i) {
            const double v = std::isfinite(s.values[i]) ? s.values[i] : lo;
            out << detail::num(px(static_cast<double>(i) * step)) << ',' << detail::num(py(v))
                << ' ' << detail::num(px(static_cast<double>(i + 1) * step)) << ','
                << detail::num(py(v)) << ' ';
        }
        out << "\"/>\n";
        detail::text(out, left + 10, top + 16 + 15 * static_cast<double>(si), s.name, 11);
        out << "<rect x=\"" << left - 2 + plot_w - 14 << "\" y=\""
            << top + 8 + 15 * static_cast<double>(si) << "\" width=\"12\" height=\"4\" fill=\""
            << s.color << "\"/>\n";
    }
    detail::text(out, left, h - 12, detail::num(x_min), 11);
    detail::text(out, w - right, h - 12, detail::num(x_max), 11, "end");
    detail::text(out, left - 6, py(lo), detail::num(lo), 10, "end");
    detail::text(out, left - 6, py(hi) + 4, detail::num(hi), 10, "end");
    if (!y_label.empty()) detail::text(out, 14, top - 10, y_label, 11);
    out << "</svg>\n";
}

/// Class-colored point cloud, used for latent PCA summaries.
inline void write_scatter(const std::string& path, const std::string& title,
                          const Eigen::MatrixXd& points, const std::vector<int>& labels) {
    const double w = 420, h = 420, margin = 40;
    auto out = detail::open(path);
    detail::header(out, w, h);
    detail::text(out, w / 2, 22, title, 13, "middle");
    if (points.rows() == 0) {
        out << "</svg>\n";
        return;
    }
    const double x_lo = points.col(0).minCoeff(), x_hi = points.col(0).maxCoeff();
    const double y_lo = points.col(1).minCoeff(), y_hi = points.col(1).maxCoeff();
    const double x_span = x_hi > x_lo ? x_hi - x_lo : 1.0;
    const double y_span = y_hi > y_lo ? y_hi - y_lo : 1.0;
    static const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};
    for (Eigen::Index i = 0; i < points.rows(); ++i) {
        const double x = margin + (points(i, 0) - x_lo) / x_span * (w - 2 * margin);
        const double y = h - margin - (points(i, 1) - y_lo) / y_span * (h - 2 * margin);
        const int cls = labels.empty() ? 0 : labels[static_cast<std::size_t>(i)];
        out << "<circle cx=\"" << detail::num(x) << "\" cy=\"" << detail::num(y)
            << "\" r=\"2\" fill=\"" << kColors[cls % 4] << "\" fill-opacity=\"0.6\"/>\n";
    }
    out << "</svg>\n";
}

} // namespace primefreq::svg
