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
 * @file fit.hpp
 * @brief Least-squares fitting of the reciprocal line 1/S = a - k t.
 *
 * Two weightings are supported. Uniform weighting is ordinary least squares
 * on the reciprocals. Direct weighting multiplies each squared reciprocal
 * residual by S^2, which turns the objective into (approximately) squared
 * relative error of S and removes the over-weighting of small early values
 * that a reciprocal residual carries.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "errors.hpp"
#include "model.hpp"

namespace hypergrowth {

enum class Weighting { uniform, direct };

inline std::string_view to_string(Weighting w) { return w == Weighting::uniform ? "uniform" : "direct"; }

/// Inclusive year interval. Endpoints snap to observed years once fitted.
struct FitWindow {
    double start_year;
    double end_year;

    FitWindow(double start, double end) : start_year(start), end_year(end) {
        if (!std::isfinite(start) || !std::isfinite(end) || !(start < end)) {
            throw InvalidArgument("fit window requires start < end");
        }
    }

    bool contains(double year) const noexcept { return year >= start_year && year <= end_year; }

    friend bool operator==(const FitWindow&, const FitWindow&) = default;
};

struct HyperbolicFit {
    HyperbolicModel model;
    FitWindow window;
    std::vector<ReciprocalResidual> residuals;  // one per observed point in the window
    double rmse_reciprocal;
    double r2_reciprocal;
    double max_abs_relative_deviation;  // percent, over the window
    Weighting weighting;

    std::size_t point_count() const noexcept { return residuals.size(); }

    double sum_squared_residuals() const noexcept {
        double ss = 0.0;
        for (const auto& r : residuals) ss += r.delta * r.delta;
        return ss;
    }
};

namespace detail {

struct LineFit {
    double intercept;  // value at x = 0
    double slope;
};

/// Weighted least-squares line, solved with x and y centred on their
/// weighted means. Requires at least two distinct x.
inline LineFit weighted_line(std::span<const double> x, std::span<const double> y,
                             std::span<const double> w) {
    double sw = 0.0, sx = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sw += w[i];
        sx += w[i] * x[i];
        sy += w[i] * y[i];
    }
    const double xbar = sx / sw;
    const double ybar = sy / sw;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - xbar;
        sxx += w[i] * dx * dx;
        sxy += w[i] * dx * (y[i] - ybar);
    }
    const double slope = sxy / sxx;
    return {ybar - slope * xbar, slope};
}

struct ReciprocalSample {
    std::vector<double> years;
    std::vector<double> reciprocals;
    std::vector<double> weights;
    std::vector<double> values;
};

inline ReciprocalSample reciprocal_sample(std::span<const Observation> points, Weighting weighting) {
    ReciprocalSample s;
    s.years.reserve(points.size());
    s.reciprocals.reserve(points.size());
    s.weights.reserve(points.size());
    s.values.reserve(points.size());
    double wmax = 0.0;
    for (const auto& p : points) {
        s.years.push_back(p.year);
        s.values.push_back(p.value);
        s.reciprocals.push_back(1.0 / p.value);
        const double w = weighting == Weighting::uniform ? 1.0 : p.value * p.value;
        s.weights.push_back(w);
        wmax = std::max(wmax, w);
    }
    for (auto& w : s.weights) w /= wmax;
    return s;
}

inline std::span<const Observation> window_points(const YearValueSeries& series, const FitWindow& window) {
    const auto pts = series.points();
    const auto first = std::lower_bound(pts.begin(), pts.end(), window.start_year,
                                        [](const Observation& p, double y) { return p.year < y; });
    const auto last = std::upper_bound(pts.begin(), pts.end(), window.end_year,
                                       [](double y, const Observation& p) { return y < p.year; });
    if (first >= last) return {};
    return pts.subspan(static_cast<std::size_t>(first - pts.begin()),
                       static_cast<std::size_t>(last - first));
}

inline HyperbolicFit fit_points(std::span<const Observation> points, Weighting weighting) {
    if (points.size() < 3) {
        throw FitError(FitErrorKind::too_few_points,
                       "hyperbolic fit needs at least 3 points, window holds " +
                           std::to_string(points.size()));
    }
    const auto sample = reciprocal_sample(points, weighting);
    const auto line = weighted_line(sample.years, sample.reciprocals, sample.weights);
    const double a = line.intercept;
    const double k = -line.slope;
    if (!(k > 0.0)) {
        throw FitError(FitErrorKind::non_hyperbolic,
                       "reciprocal values do not decrease over the window (fitted k <= 0)");
    }
    for (double t : sample.years) {
        if (!(a - k * t > 0.0)) {
            throw FitError(FitErrorKind::singularity_in_window,
                           "fitted singularity " + std::to_string(a / k) +
                               " lies inside or before the fit window");
        }
    }
    if (!(a > 0.0)) {
        throw FitError(FitErrorKind::non_hyperbolic, "fitted intercept a <= 0");
    }

    HyperbolicModel model(a, k);
    std::vector<ReciprocalResidual> residuals;
    residuals.reserve(points.size());
    double ss = 0.0, mean = 0.0, max_dev = 0.0;
    for (const auto& p : points) {
        residuals.push_back(ReciprocalResidual::make(p.year, p.value, model));
        ss += residuals.back().delta * residuals.back().delta;
        mean += residuals.back().observed_reciprocal;
        max_dev = std::max(max_dev, std::abs(relative_deviation(p, model)));
    }
    mean /= static_cast<double>(points.size());
    double tss = 0.0;
    for (const auto& r : residuals) {
        tss += (r.observed_reciprocal - mean) * (r.observed_reciprocal - mean);
    }
    const double n = static_cast<double>(points.size());
    return HyperbolicFit{model,
                         FitWindow(points.front().year, points.back().year),
                         std::move(residuals),
                         std::sqrt(ss / n),
                         tss > 0.0 ? 1.0 - ss / tss : 1.0,
                         max_dev,
                         weighting};
}

}  // namespace detail

/**
 * Fits 1/S = a - k t to the observations inside the window.
 *
 * The returned window is snapped to the first and last observed years it
 * contains. Throws FitError when fewer than three points fall inside, when
 * the fitted k is not positive, when the fitted singularity falls inside (or
 * before) the window, or when a is not positive.
 */
inline HyperbolicFit fit_hyperbolic(const YearValueSeries& series, const FitWindow& window,
                                    Weighting weighting = Weighting::uniform) {
    return detail::fit_points(detail::window_points(series, window), weighting);
}

/// Fits the whole series.
inline HyperbolicFit fit_hyperbolic(const YearValueSeries& series,
                                    Weighting weighting = Weighting::uniform) {
    return detail::fit_points(series.points(), weighting);
}

struct PointDeviation {
    double year;
    double observed;
    std::optional<double> fitted;   // empty at or past the singularity
    std::optional<double> percent;  // 100 (observed - fitted) / fitted
    bool in_window;
};

struct Diagnostics {
    double rmse_reciprocal;
    double r2_reciprocal;
    double max_abs_relative_deviation;
    std::vector<PointDeviation> deviations;  // every observed point of the series
};

/// Goodness of fit over the window plus the signed relative deviation at
/// every point of the series, inside and outside the window.
inline Diagnostics goodness(const HyperbolicFit& fit, const YearValueSeries& series) {
    Diagnostics d{fit.rmse_reciprocal, fit.r2_reciprocal, fit.max_abs_relative_deviation, {}};
    d.deviations.reserve(series.size());
    for (const auto& p : series) {
        PointDeviation dev{p.year, p.value, std::nullopt, std::nullopt, fit.window.contains(p.year)};
        if (fit.model.reciprocal_at(p.year) > 0.0) {
            dev.fitted = evaluate(fit.model, p.year);
            dev.percent = relative_deviation(p, fit.model);
        }
        d.deviations.push_back(dev);
    }
    return d;
}

/// Residual standard error sqrt(SS / (n - 2)) in reciprocal units.
inline double rmse_per_dof(const HyperbolicFit& fit) {
    const double dof = static_cast<double>(fit.point_count()) - 2.0;
    return std::sqrt(fit.sum_squared_residuals() / dof);
}

/**
 * Fits every contiguous window whose endpoints are observed years and which
 * holds at least min_points points, and ranks the successful fits.
 *
 * Ranking is by rmse_per_dof ascending. Scores below 1e-10 times the largest
 * reciprocal in the series count as exact fits and tie at zero; ties go to
 * the longer window, then the earlier start.
 */
inline std::vector<HyperbolicFit> scan_windows(const YearValueSeries& series, std::size_t min_points = 3,
                                               Weighting weighting = Weighting::uniform) {
    min_points = std::max<std::size_t>(min_points, 3);
    const auto pts = series.points();
    const std::size_t n = pts.size();
    double max_reciprocal = 0.0;
    for (const auto& p : pts) max_reciprocal = std::max(max_reciprocal, 1.0 / p.value);
    const double exact_tol = 1e-10 * max_reciprocal;

    struct Ranked {
        double score;
        HyperbolicFit fit;
    };
    std::vector<Ranked> ranked;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + min_points - 1; j < n; ++j) {
            try {
                auto fit = detail::fit_points(pts.subspan(i, j - i + 1), weighting);
                double score = rmse_per_dof(fit);
                if (score <= exact_tol) score = 0.0;
                ranked.push_back({score, std::move(fit)});
            } catch (const FitError&) {
            }
        }
    }
    std::stable_sort(ranked.begin(), ranked.end(), [](const Ranked& l, const Ranked& r) {
        if (l.score != r.score) return l.score < r.score;
        const double ll = l.fit.window.end_year - l.fit.window.start_year;
        const double rl = r.fit.window.end_year - r.fit.window.start_year;
        if (ll != rl) return ll > rl;
        return l.fit.window.start_year < r.fit.window.start_year;
    });
    std::vector<HyperbolicFit> out;
    out.reserve(ranked.size());
    for (auto& r : ranked) out.push_back(std::move(r.fit));
    return out;
}

}  // namespace hypergrowth
