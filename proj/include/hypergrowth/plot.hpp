/*
 * Copyright (c) 2026, hypergrowth contributors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/**
 * @file plot.hpp
 * @brief Figure data in two views: reciprocal values against a straight line
 *        (reciprocal-linear) and values on a log axis against the hyperbola
 *        (semilog-direct).
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fit.hpp"
#include "model.hpp"

namespace hypergrowth {

enum class PlotMode { reciprocal_linear, semilog_direct };

inline std::string_view to_string(PlotMode m) {
    return m == PlotMode::reciprocal_linear ? "reciprocal-linear" : "semilog-direct";
}

struct PlotRow {
    double year;
    double observed;               // 1/S or S depending on mode
    std::optional<double> fitted;  // same units as observed
    std::optional<double> residual_reciprocal;
};

struct CurvePoint {
    double year;
    double value;
};

struct Annotation {
    std::string label;
    double year;
};

struct PlotSheet {
    PlotMode mode;
    std::string title;
    std::vector<PlotRow> rows;
    std::vector<std::vector<CurvePoint>> curves;  // one per fit
    std::vector<Annotation> annotations;
};

namespace detail {

/// The fit whose window covers the year, else the one with the nearest window.
inline const HyperbolicFit* fit_for_year(const std::vector<HyperbolicFit>& fits, double year) {
    const HyperbolicFit* best = nullptr;
    double best_distance = std::numeric_limits<double>::infinity();
    for (const auto& f : fits) {
        const double d = f.window.contains(year)
                             ? 0.0
                             : std::min(std::abs(year - f.window.start_year), std::abs(year - f.window.end_year));
        if (d < best_distance) {
            best_distance = d;
            best = &f;
        }
    }
    return best;
}

inline std::string xml_escape(std::string_view s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out.push_back(c);
        }
    }
    return out;
}

inline std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

inline double nice_step(double range, int target) {
    const double raw = range / target;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    const double f = raw / mag;
    return (f < 1.5 ? 1.0 : f < 3.0 ? 2.0 : f < 7.0 ? 5.0 : 10.0) * mag;
}

}  // namespace detail

/**
 * Builds the sheet for the given fits. Fitted curves are sampled at 200
 * points and never closer than one year to the singularity. With one fit the
 * curve spans the whole series; with several, each spans its own window.
 */
inline PlotSheet emit_plot(const YearValueSeries& series, const std::vector<HyperbolicFit>& fits, PlotMode mode,
                           std::vector<Annotation> annotations = {}) {
    PlotSheet sheet{mode, series.label(), {}, {}, std::move(annotations)};
    const bool reciprocal = mode == PlotMode::reciprocal_linear;
    for (const auto& p : series) {
        PlotRow row{p.year, reciprocal ? 1.0 / p.value : p.value, std::nullopt, std::nullopt};
        if (const auto* f = detail::fit_for_year(fits, p.year)) {
            const double line = f->model.reciprocal_at(p.year);
            row.residual_reciprocal = 1.0 / p.value - line;
            if (reciprocal) {
                row.fitted = line;
            } else if (line > 0.0) {
                row.fitted = 1.0 / line;
            }
        }
        sheet.rows.push_back(row);
    }
    for (const auto& f : fits) {
        double lo = fits.size() == 1 ? series.front().year : f.window.start_year;
        double hi = fits.size() == 1 ? series.back().year : f.window.end_year;
        hi = std::min(hi, f.model.singularity() - 1.0);
        std::vector<CurvePoint> curve;
        if (hi > lo) {
            constexpr int samples = 200;
            for (int i = 0; i < samples; ++i) {
                const double t = lo + (hi - lo) * i / (samples - 1);
                const double line = f.model.reciprocal_at(t);
                curve.push_back({t, reciprocal ? line : 1.0 / line});
            }
        }
        sheet.curves.push_back(std::move(curve));
    }
    return sheet;
}

/// `year,observed,fitted,residual_reciprocal`, one row per observation.
inline std::string plot_csv(const PlotSheet& sheet) {
    std::string out = "year,observed,fitted,residual_reciprocal\n";
    const auto full = [](double v) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return std::string(buf);
    };
    for (const auto& r : sheet.rows) {
        out += full(r.year) + "," + full(r.observed) + "," + (r.fitted ? full(*r.fitted) : "") + "," +
               (r.residual_reciprocal ? full(*r.residual_reciprocal) : "") + "\n";
    }
    return out;
}

/// Static SVG with inline styles. Log value axis in semilog-direct mode.
inline std::string plot_svg(const PlotSheet& sheet) {
    constexpr double width = 800, height = 500;
    constexpr double left = 80, right = 20, top = 40, bottom = 50;
    const bool log_axis = sheet.mode == PlotMode::semilog_direct;

    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
    double ymin = xmin, ymax = -xmin;
    const auto include = [&](double x, double y) {
        if (log_axis && !(y > 0.0)) return;
        const double yy = log_axis ? std::log10(y) : y;
        xmin = std::min(xmin, x);
        xmax = std::max(xmax, x);
        ymin = std::min(ymin, yy);
        ymax = std::max(ymax, yy);
    };
    for (const auto& r : sheet.rows) include(r.year, r.observed);
    for (const auto& c : sheet.curves) {
        for (const auto& p : c) include(p.year, p.value);
    }
    if (!(xmax > xmin)) {
        xmin -= 1;
        xmax += 1;
    }
    if (!(ymax > ymin)) {
        ymin -= 1;
        ymax += 1;
    }
    const double ypad = 0.05 * (ymax - ymin);
    ymin -= ypad;
    ymax += ypad;

    const auto px = [&](double x) { return left + (x - xmin) / (xmax - xmin) * (width - left - right); };
    const auto py = [&](double y) {
        const double yy = log_axis ? std::log10(y) : y;
        return height - bottom - (yy - ymin) / (ymax - ymin) * (height - top - bottom);
    };
    using detail::num;

    std::string s = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(width) + "\" height=\"" +
                    num(height) + "\" viewBox=\"0 0 " + num(width) + " " + num(height) + "\">\n";
    s += "<rect x=\"0\" y=\"0\" width=\"" + num(width) + "\" height=\"" + num(height) +
         "\" style=\"fill:#ffffff;stroke:none\"/>\n";
    s += "<text x=\"" + num(width / 2) + "\" y=\"24\" style=\"font-family:sans-serif;font-size:16px;text-anchor:middle\">" +
         detail::xml_escape(sheet.title) + " (" + std::string(to_string(sheet.mode)) + ")</text>\n";

    // Axes and ticks.
    s += "<line x1=\"" + num(left) + "\" y1=\"" + num(height - bottom) + "\" x2=\"" + num(width - right) + "\" y2=\"" +
         num(height - bottom) + "\" style=\"stroke:#000000;stroke-width:1\"/>\n";
    s += "<line x1=\"" + num(left) + "\" y1=\"" + num(top) + "\" x2=\"" + num(left) + "\" y2=\"" +
         num(height - bottom) + "\" style=\"stroke:#000000;stroke-width:1\"/>\n";
    const double xstep = detail::nice_step(xmax - xmin, 8);
    for (double x = std::ceil(xmin / xstep) * xstep; x <= xmax; x += xstep) {
        s += "<text x=\"" + num(px(x)) + "\" y=\"" + num(height - bottom + 18) +
             "\" style=\"font-family:sans-serif;font-size:11px;text-anchor:middle\">" + num(x) + "</text>\n";
    }
    const double ystep = log_axis ? 1.0 : detail::nice_step(ymax - ymin, 6);
    for (double y = std::ceil(ymin / ystep) * ystep; y <= ymax; y += ystep) {
        const double value = log_axis ? std::pow(10.0, y) : y;
        s += "<text x=\"" + num(left - 6) + "\" y=\"" + num(py(value) + 4) +
             "\" style=\"font-family:sans-serif;font-size:11px;text-anchor:end\">" + num(value) + "</text>\n";
        s += "<line x1=\"" + num(left) + "\" y1=\"" + num(py(value)) + "\" x2=\"" + num(width - right) + "\" y2=\"" +
             num(py(value)) + "\" style=\"stroke:#dddddd;stroke-width:0.5\"/>\n";
    }
    s += "<text x=\"" + num(width / 2) + "\" y=\"" + num(height - 10) +
         "\" style=\"font-family:sans-serif;font-size:12px;text-anchor:middle\">Year</text>\n";
    s += "<text x=\"16\" y=\"" + num(height / 2) + "\" transform=\"rotate(-90 16 " + num(height / 2) +
         ")\" style=\"font-family:sans-serif;font-size:12px;text-anchor:middle\">" +
         std::string(log_axis ? "GDP [billions 1990 GK$]" : "1 / GDP [1 / billions 1990 GK$]") + "</text>\n";

    for (const auto& r : sheet.rows) {
        if (log_axis && !(r.observed > 0.0)) continue;
        s += "<circle cx=\"" + num(px(r.year)) + "\" cy=\"" + num(py(r.observed)) +
             "\" r=\"2.5\" style=\"fill:#1f4e79;fill-opacity:0.7;stroke:none\"/>\n";
    }
    for (const auto& c : sheet.curves) {
        if (c.empty()) continue;
        s += "<polyline style=\"fill:none;stroke:#c0392b;stroke-width:1.5\" points=\"";
        for (const auto& p : c) {
            if (log_axis && !(p.value > 0.0)) continue;
            s += num(px(p.year)) + "," + num(py(p.value)) + " ";
        }
        s += "\"/>\n";
    }
    for (const auto& a : sheet.annotations) {
        if (a.year < xmin || a.year > xmax) continue;
        s += "<line x1=\"" + num(px(a.year)) + "\" y1=\"" + num(top) + "\" x2=\"" + num(px(a.year)) + "\" y2=\"" +
             num(height - bottom) + "\" style=\"stroke:#7f8c8d;stroke-width:1;stroke-dasharray:4,3\"/>\n";
        // Labels near the right edge sit to the left of their line.
        const bool flip = px(a.year) > 0.75 * width;
        s += "<text x=\"" + num(px(a.year) + (flip ? -3 : 3)) + "\" y=\"" + num(top + 12) +
             "\" style=\"font-family:sans-serif;font-size:11px;text-anchor:" + (flip ? "end" : "start") + "\">" +
             detail::xml_escape(a.label) + "</text>\n";
    }
    s += "</svg>\n";
    return s;
}

}  // namespace hypergrowth
