// Copyright 2026 The bethe-transport Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file svg.hpp
 * @brief Minimal SVG line/marker plots with axes, ticks, error bars and a
 *        legend. The CSV files are the data of record; these are previews.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

namespace bethe::svg {

struct Series {
    std::string label;
    std::string color = "#1f77b4";
    std::vector<double> x, y;
    std::vector<double> yerr; ///< optional, same length as y
    bool line = true;
    bool markers = false;
};

struct Plot {
    std::string title, xlabel, ylabel;
    std::vector<Series> series;
    int width = 640, height = 440;
};

inline constexpr const char *kBlue = "#1f5fbf";
inline constexpr const char *kRed = "#d62728";
inline constexpr const char *kOrange = "#ff7f0e";
inline constexpr const char *kGreen = "#2ca02c";
inline constexpr const char *kGray = "#7f7f7f";

namespace detail {

inline std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

inline std::string escape(const std::string &s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        default: out += c;
        }
    }
    return out;
}

/// Roughly five "nice" tick positions covering [lo, hi].
inline std::vector<double> ticks(double lo, double hi) {
    const double span = hi - lo;
    const double raw = span / 5.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double m : {1.0, 2.0, 5.0, 10.0}) {
        step = m * mag;
        if (span / step <= 6.0) break;
    }
    std::vector<double> t;
    for (double v = std::ceil(lo / step) * step; v <= hi + 1e-9 * span; v += step) t.push_back(std::abs(v) < 1e-12 * span ? 0.0 : v);
    return t;
}

} // namespace detail

inline void render(std::ostream &os, const Plot &p) {
    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin, ymin = xmin, ymax = -xmin;
    for (const auto &s : p.series) {
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
            const double e = i < s.yerr.size() ? s.yerr[i] : 0.0;
            xmin = std::min(xmin, s.x[i]);
            xmax = std::max(xmax, s.x[i]);
            ymin = std::min(ymin, s.y[i] - e);
            ymax = std::max(ymax, s.y[i] + e);
        }
    }
    if (!std::isfinite(xmin)) xmin = 0, xmax = 1, ymin = 0, ymax = 1;
    if (xmax - xmin < 1e-12) xmin -= 0.5, xmax += 0.5;
    if (ymax - ymin < 1e-12) ymin -= 0.5, ymax += 0.5;
    const double pad = 0.05 * (ymax - ymin);
    ymin -= pad;
    ymax += pad;

    const double left = 70, right = 20, top = 40, bottom = 55;
    const double w = p.width - left - right, h = p.height - top - bottom;
    const auto X = [&](double x) { return left + (x - xmin) / (xmax - xmin) * w; };
    const auto Y = [&](double y) { return top + (ymax - y) / (ymax - ymin) * h; };
    using detail::num;

    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << p.width << "\" height=\"" << p.height
       << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << p.width / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">"
       << detail::escape(p.title) << "</text>\n";
    os << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << w << "\" height=\"" << h
       << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (double t : detail::ticks(xmin, xmax)) {
        os << "<line x1=\"" << num(X(t)) << "\" y1=\"" << top + h << "\" x2=\"" << num(X(t)) << "\" y2=\""
           << top + h + 5 << "\" stroke=\"black\"/>";
        os << "<text x=\"" << num(X(t)) << "\" y=\"" << top + h + 18 << "\" text-anchor=\"middle\">" << num(t)
           << "</text>\n";
    }
    for (double t : detail::ticks(ymin, ymax)) {
        os << "<line x1=\"" << left - 5 << "\" y1=\"" << num(Y(t)) << "\" x2=\"" << left << "\" y2=\"" << num(Y(t))
           << "\" stroke=\"black\"/>";
        os << "<text x=\"" << left - 8 << "\" y=\"" << num(Y(t) + 4) << "\" text-anchor=\"end\">" << num(t)
           << "</text>\n";
    }
    os << "<text x=\"" << left + w / 2 << "\" y=\"" << p.height - 12 << "\" text-anchor=\"middle\">"
       << detail::escape(p.xlabel) << "</text>\n";
    os << "<text x=\"16\" y=\"" << top + h / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
       << top + h / 2 << ")\">" << detail::escape(p.ylabel) << "</text>\n";

    int legend_row = 0;
    for (const auto &s : p.series) {
        if (s.line && s.x.size() > 1) {
            os << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\" points=\"";
            for (std::size_t i = 0; i < s.x.size(); ++i)
                if (std::isfinite(s.y[i])) os << num(X(s.x[i])) << ',' << num(Y(s.y[i])) << ' ';
            os << "\"/>\n";
        }
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!std::isfinite(s.y[i])) continue;
            if (i < s.yerr.size() && s.yerr[i] > 0) {
                os << "<line x1=\"" << num(X(s.x[i])) << "\" y1=\"" << num(Y(s.y[i] - s.yerr[i])) << "\" x2=\""
                   << num(X(s.x[i])) << "\" y2=\"" << num(Y(s.y[i] + s.yerr[i])) << "\" stroke=\"" << s.color
                   << "\"/>\n";
            }
            if (s.markers) {
                os << "<circle cx=\"" << num(X(s.x[i])) << "\" cy=\"" << num(Y(s.y[i])) << "\" r=\"2.5\" fill=\""
                   << s.color << "\"/>\n";
            }
        }
        if (!s.label.empty()) {
            const double ly = top + 14 + 16 * legend_row++;
            os << "<rect x=\"" << left + w - 150 << "\" y=\"" << ly - 9 << "\" width=\"10\" height=\"10\" fill=\""
               << s.color << "\"/><text x=\"" << left + w - 135 << "\" y=\"" << ly << "\">" << detail::escape(s.label)
               << "</text>\n";
        }
    }
    os << "</svg>\n";
}

} // namespace bethe::svg
