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
 * @file takeoff.hpp
 * @brief Test for a takeoff from stagnation to growth at a predicted year.
 *
 * Two models are fitted to log S by least squares:
 *
 *  - hyperbolic:  log S = c - log(T - t), with singularity T past the data;
 *  - broken-line: log S = L + r0 (t - b) for t <= b and L + r1 (t - b) after,
 *                 i.e. slow (ideally flat) growth until a break year b and
 *                 exponential growth at rate r1 afterwards.
 *
 * A takeoff signature needs all of: growth before the break below the
 * stagnation bound; a prominent change, meaning the post/pre rate ratio
 * exceeds a threshold and the broken-line model beats the hyperbola by a
 * corrected Akaike gap; and a break year close to the predicted year.
 *
 * Both models are invariant to rescaling S and to shifting the years, and so
 * is the verdict.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <boost/math/tools/minima.hpp>

#include "errors.hpp"
#include "model.hpp"

namespace hypergrowth {

struct TakeoffHypothesis {
    double predicted_year;
    double search_halfwidth = 50.0;
};

/// Predicted takeoff years for the two region classes.
inline constexpr double developed_takeoff_year = 1750.0;
inline constexpr double less_developed_takeoff_year = 1900.0;

struct TakeoffThresholds {
    double stagnation_rate = 0.001;  // per year, i.e. 0.1 %/yr
    double prominence_ratio = 10.0;
    double ic_gap = 10.0;
    double rate_floor = 1e-4;  // denominator floor of the rate ratio, per year
    double break_step = 1.0;   // years between candidate break years
};

struct Criterion {
    bool passed;
    double value;
};

struct TakeoffTestResult {
    bool positive;
    Criterion prominence;         // value: post/pre growth-rate ratio
    Criterion stagnation_before;  // value: fitted growth rate before the break, per year
    Criterion timing;             // value: best break year
    double model_comparison;      // AICc(hyperbolic) - AICc(broken-line); positive favours a break
    double post_rate;
    double predicted_year;
    double halfwidth;
};

struct HyperbolicLogFit {
    double singularity;
    double offset;  // c
    double rss;
};

struct BrokenLineFit {
    double break_year;
    double level;
    double pre_rate;
    double post_rate;
    double rss;
};

struct TakeoffModels {
    HyperbolicLogFit hyperbolic;
    BrokenLineFit broken_line;
    std::size_t n;
    double aicc_hyperbolic;
    double aicc_broken_line;

    double ic_gap() const noexcept { return aicc_hyperbolic - aicc_broken_line; }
};

namespace detail {

inline double aicc(double rss, std::size_t n, int params) {
    const double nn = static_cast<double>(n);
    const double p = params;
    const double variance = std::max(rss / nn, 1e-24);
    return nn * std::log(variance) + 2.0 * p + 2.0 * p * (p + 1.0) / (nn - p - 1.0);
}

inline double hyperbolic_profile_rss(const std::vector<double>& t, const std::vector<double>& y, double T,
                                     double* offset = nullptr) {
    double mean = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) mean += y[i] + std::log(T - t[i]);
    mean /= static_cast<double>(t.size());
    double rss = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        const double r = y[i] + std::log(T - t[i]) - mean;
        rss += r * r;
    }
    if (offset) *offset = mean;
    return rss;
}

/// For fixed T the offset c has a closed form, so only log(T - t_max) is searched.
inline HyperbolicLogFit fit_hyperbolic_log(const std::vector<double>& t, const std::vector<double>& y) {
    const double t_max = t.back();
    const double span = t.back() - t.front();
    const double lo = std::log(1e-6 * span);
    const double hi = std::log(1e6 * span);
    const auto rss_at = [&](double u) { return hyperbolic_profile_rss(t, y, t_max + std::exp(u)); };

    constexpr int grid = 480;
    const double step = (hi - lo) / grid;
    int best = 0;
    double best_rss = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= grid; ++i) {
        const double v = rss_at(lo + step * i);
        if (v < best_rss) {
            best_rss = v;
            best = i;
        }
    }
    const double a = lo + step * std::max(best - 1, 0);
    const double b = lo + step * std::min(best + 1, grid);
    const auto [u, rss] = boost::math::tools::brent_find_minima(rss_at, a, b, 52);
    HyperbolicLogFit fit{t_max + std::exp(u), 0.0, rss};
    if (best_rss < rss) fit = {t_max + std::exp(lo + step * best), 0.0, best_rss};
    hyperbolic_profile_rss(t, y, fit.singularity, &fit.offset);
    return fit;
}

inline BrokenLineFit fit_broken_line_at(const std::vector<double>& t, const std::vector<double>& y, double b) {
    const auto n = static_cast<Eigen::Index>(t.size());
    Eigen::MatrixXd X(n, 3);
    Eigen::VectorXd Y(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double dt = t[static_cast<std::size_t>(i)] - b;
        X(i, 0) = 1.0;
        X(i, 1) = std::min(dt, 0.0);
        X(i, 2) = std::max(dt, 0.0);
        Y(i) = y[static_cast<std::size_t>(i)];
    }
    const Eigen::Vector3d beta = X.colPivHouseholderQr().solve(Y);
    const double rss = (X * beta - Y).squaredNorm();
    return {b, beta(0), beta(1), beta(2), rss};
}

/// Break years on a lattice anchored at the first observation, plus every
/// observed year, keeping at least two observations on each side.
inline BrokenLineFit fit_broken_line(const std::vector<double>& t, const std::vector<double>& y, double step) {
    std::vector<double> candidates = t;
    for (long j = 1;; ++j) {
        const double b = t.front() + static_cast<double>(j) * step;
        if (b >= t.back()) break;
        candidates.push_back(b);
    }
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

    BrokenLineFit best{0.0, 0.0, 0.0, 0.0, std::numeric_limits<double>::infinity()};
    for (double b : candidates) {
        const auto before = std::upper_bound(t.begin(), t.end(), b) - t.begin();
        const auto after = static_cast<std::ptrdiff_t>(t.size()) - before;
        if (before < 2 || after < 2) continue;
        const auto fit = fit_broken_line_at(t, y, b);
        if (fit.rss < best.rss) best = fit;
    }
    return best;
}

}  // namespace detail

inline constexpr std::size_t takeoff_min_points = 7;

/// Fits both competing models to log S. Independent of the predicted year.
inline TakeoffModels fit_takeoff_models(const YearValueSeries& series, const TakeoffThresholds& thresholds = {}) {
    if (series.size() < takeoff_min_points) {
        throw TakeoffError(TakeoffErrorKind::insufficient_points,
                           "takeoff test needs at least " + std::to_string(takeoff_min_points) +
                               " observations, series has " + std::to_string(series.size()));
    }
    const auto t = series.years();
    std::vector<double> y;
    y.reserve(series.size());
    for (const auto& p : series) y.push_back(std::log(p.value));

    TakeoffModels m{detail::fit_hyperbolic_log(t, y), detail::fit_broken_line(t, y, thresholds.break_step),
                    series.size(), 0.0, 0.0};
    m.aicc_hyperbolic = detail::aicc(m.hyperbolic.rss, m.n, 3);
    m.aicc_broken_line = detail::aicc(m.broken_line.rss, m.n, 5);
    return m;
}

/// Validates the hypothesis window against the series.
inline void check_hypothesis(const YearValueSeries& series, const TakeoffHypothesis& h) {
    if (!(h.search_halfwidth > 0.0)) throw InvalidArgument("search halfwidth must be positive");
    if (!(h.predicted_year > series.front().year && h.predicted_year < series.back().year)) {
        throw TakeoffError(TakeoffErrorKind::window_outside_data,
                           "predicted year " + std::to_string(h.predicted_year) +
                               " does not have observations on both sides");
    }
    if (series.count_between(h.predicted_year - h.search_halfwidth, h.predicted_year + h.search_halfwidth) < 2) {
        throw TakeoffError(TakeoffErrorKind::insufficient_points,
                           "search window around " + std::to_string(h.predicted_year) +
                               " holds fewer than 2 observations");
    }
}

/**
 * Smallest widening of the search halfwidth (never narrower than requested)
 * that puts at least two observations inside the window. Sparse historical
 * grids often have a single observation within 50 years of 1750.
 */
inline TakeoffHypothesis widened_to_data(const YearValueSeries& series, TakeoffHypothesis h) {
    std::vector<double> distance;
    for (const auto& p : series) distance.push_back(std::abs(p.year - h.predicted_year));
    std::sort(distance.begin(), distance.end());
    if (distance.size() >= 2) h.search_halfwidth = std::max(h.search_halfwidth, distance[1]);
    return h;
}

/// Applies the three criteria for one hypothesis to already-fitted models.
inline TakeoffTestResult evaluate_takeoff(const TakeoffModels& m, const TakeoffHypothesis& h,
                                          const TakeoffThresholds& thresholds = {}) {
    const auto& bl = m.broken_line;
    const double ratio = bl.post_rate / std::max(bl.pre_rate, thresholds.rate_floor);
    const double gap = m.ic_gap();

    TakeoffTestResult r{};
    r.prominence = {ratio > thresholds.prominence_ratio && gap > thresholds.ic_gap, ratio};
    r.stagnation_before = {bl.pre_rate < thresholds.stagnation_rate, bl.pre_rate};
    r.timing = {std::abs(bl.break_year - h.predicted_year) <= h.search_halfwidth, bl.break_year};
    r.model_comparison = gap;
    r.post_rate = bl.post_rate;
    r.predicted_year = h.predicted_year;
    r.halfwidth = h.search_halfwidth;
    r.positive = r.prominence.passed && r.stagnation_before.passed && r.timing.passed;
    return r;
}

/// Runs the takeoff test for one predicted year. Throws TakeoffError when the
/// series is too short or the window does not sit inside the data.
inline TakeoffTestResult takeoff_test(const YearValueSeries& series, const TakeoffHypothesis& hypothesis,
                                      const TakeoffThresholds& thresholds = {}) {
    check_hypothesis(series, hypothesis);
    return evaluate_takeoff(fit_takeoff_models(series, thresholds), hypothesis, thresholds);
}

struct TakeoffScanEntry {
    double year;
    std::optional<TakeoffTestResult> result;  // empty when the year is not testable
    std::string error;
};

/// Runs the test at every grid year. Years that cannot be tested are kept
/// with an error message and count as negative. A series has no takeoff iff
/// no entry is positive.
inline std::vector<TakeoffScanEntry> takeoff_scan(const YearValueSeries& series, const std::vector<double>& year_grid,
                                                  double halfwidth = 50.0, const TakeoffThresholds& thresholds = {}) {
    std::vector<TakeoffScanEntry> out;
    if (year_grid.empty()) return out;
    std::optional<TakeoffModels> models;
    std::string model_error;
    try {
        models = fit_takeoff_models(series, thresholds);
    } catch (const TakeoffError& e) {
        model_error = e.what();
    }
    for (double year : year_grid) {
        TakeoffScanEntry entry{year, std::nullopt, {}};
        if (!models) {
            entry.error = model_error;
        } else {
            try {
                const TakeoffHypothesis h{year, halfwidth};
                check_hypothesis(series, h);
                entry.result = evaluate_takeoff(*models, h, thresholds);
            } catch (const TakeoffError& e) {
                entry.error = e.what();
            }
        }
        out.push_back(std::move(entry));
    }
    return out;
}

inline bool any_positive(const std::vector<TakeoffScanEntry>& scan) {
    return std::any_of(scan.begin(), scan.end(),
                       [](const TakeoffScanEntry& e) { return e.result && e.result->positive; });
}

}  // namespace hypergrowth
