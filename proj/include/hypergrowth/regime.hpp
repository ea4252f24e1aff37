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
 * @file regime.hpp
 * @brief Diversions from a fitted hyperbolic trajectory and two-regime
 *        segmentation.
 *
 * Reciprocals above the fitted line (positive residuals) mean the series
 * grows slower than the hyperbola; reciprocals below it mean faster.
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
#include "fit.hpp"
#include "model.hpp"

namespace hypergrowth {

enum class Direction { slower, faster };

inline std::string_view to_string(Direction d) { return d == Direction::slower ? "slower" : "faster"; }

/**
 * How residuals are standardised before thresholding.
 *
 * reciprocal: the raw delta 1/S - (a - k t).
 * relative:   S * delta = 1 - S (a - k t), the relative shortfall of the
 *             observation against the hyperbola. Under multiplicative noise
 *             its spread does not depend on the size of S.
 */
enum class ResidualScale { reciprocal, relative };

struct DiversionOptions {
    std::size_t consecutive = 2;  // m
    double tau = 3.0;
    ResidualScale scale = ResidualScale::relative;
    bool allow_absolute_fallback = true;
};

struct DiversionFinding {
    double year;  // first year of the offending run
    Direction direction;
    std::vector<ReciprocalResidual> evidence;  // the run and every later point
    std::optional<long> proximity_years;       // rounded singularity minus rounded year
    double threshold;                          // in standardised residual units
    bool used_absolute_fallback;
};

/// Rounded singularity minus rounded diversion year.
inline long proximity(const HyperbolicModel& model, double diversion_year) {
    const long p = round_year(model.singularity()) - round_year(diversion_year);
    if (p < 0) {
        throw RegimeError(RegimeErrorKind::negative_proximity,
                          "diversion year " + std::to_string(diversion_year) +
                              " lies after the singularity " + std::to_string(model.singularity()));
    }
    return p;
}

namespace detail {

inline double standardised(const ReciprocalResidual& r, ResidualScale scale) {
    return scale == ResidualScale::reciprocal ? r.delta : r.delta / r.observed_reciprocal;
}

inline double median(std::vector<double> v) {
    const std::size_t n = v.size();
    const auto mid = v.begin() + static_cast<std::ptrdiff_t>(n / 2);
    std::nth_element(v.begin(), mid, v.end());
    const double upper = *mid;
    if (n % 2 == 1) return upper;
    return 0.5 * (upper + *std::max_element(v.begin(), mid));
}

/// Median absolute deviation scaled to a normal sigma.
inline double robust_scale(const std::vector<double>& values) {
    if (values.empty()) return 0.0;
    const double centre = median(values);
    std::vector<double> dev;
    dev.reserve(values.size());
    for (double v : values) dev.push_back(std::abs(v - centre));
    return 1.482602218505602 * median(std::move(dev));
}

struct Threshold {
    double value;
    bool fallback;
};

inline Threshold diversion_threshold(std::span<const ReciprocalResidual> in_window,
                                     const DiversionOptions& opts) {
    std::vector<double> z;
    z.reserve(in_window.size());
    double max_observed = 0.0;
    for (const auto& r : in_window) {
        z.push_back(standardised(r, opts.scale));
        max_observed = std::max(max_observed, opts.scale == ResidualScale::reciprocal
                                                  ? r.observed_reciprocal
                                                  : 1.0);
    }
    const double absolute = 1e-9 * max_observed;
    const double scaled = opts.tau * robust_scale(z);
    if (scaled > absolute) return {scaled, false};
    if (!opts.allow_absolute_fallback) {
        throw RegimeError(RegimeErrorKind::degenerate_scale,
                          "in-window residuals have zero spread; threshold cannot be scaled");
    }
    return {absolute, true};
}

}  // namespace detail

/**
 * Scans forward from the end of the fit window for the first run of
 * opts.consecutive points whose standardised residuals share a sign and each
 * exceed tau times the robust (MAD) scale of the in-window residuals.
 *
 * Returns nothing when the series has no points past the window or no such
 * run exists. When the in-window residuals have (numerically) zero spread
 * the threshold falls back to 1e-9 of the largest in-window observation in
 * standardised units, or throws RegimeError if the fallback is disabled.
 */
inline std::optional<DiversionFinding> detect_diversion(const YearValueSeries& series,
                                                        const HyperbolicFit& fit,
                                                        const DiversionOptions& opts = {}) {
    if (opts.consecutive == 0) throw InvalidArgument("consecutive count must be at least 1");
    const auto threshold = detail::diversion_threshold(fit.residuals, opts);

    std::vector<ReciprocalResidual> after;
    for (const auto& p : series) {
        if (p.year > fit.window.end_year) after.push_back(ReciprocalResidual::make(p.year, p.value, fit.model));
    }
    if (after.size() < opts.consecutive) return std::nullopt;

    for (std::size_t i = 0; i + opts.consecutive <= after.size(); ++i) {
        const double first = detail::standardised(after[i], opts.scale);
        if (!(std::abs(first) > threshold.value)) continue;
        bool run = true;
        for (std::size_t j = i + 1; j < i + opts.consecutive && run; ++j) {
            const double z = detail::standardised(after[j], opts.scale);
            run = std::abs(z) > threshold.value && std::signbit(z) == std::signbit(first);
        }
        if (!run) continue;

        DiversionFinding finding{after[i].year,
                                 first > 0.0 ? Direction::slower : Direction::faster,
                                 std::vector<ReciprocalResidual>(after.begin() + static_cast<std::ptrdiff_t>(i),
                                                                 after.end()),
                                 std::nullopt,
                                 threshold.value,
                                 threshold.fallback};
        if (finding.year <= fit.model.singularity()) {
            finding.proximity_years = proximity(fit.model, finding.year);
        }
        return finding;
    }
    return std::nullopt;
}

enum class SegmentKind { hyperbolic, diversion, unmodeled };

inline std::string_view to_string(SegmentKind k) {
    switch (k) {
        case SegmentKind::hyperbolic: return "hyperbolic";
        case SegmentKind::diversion: return "diversion";
        default: return "unmodeled";
    }
}

struct Segment {
    FitWindow window;
    SegmentKind kind;
    std::optional<HyperbolicFit> fit;     // set for hyperbolic segments
    std::optional<Direction> direction;   // set for diversion segments
};

struct RegimeSegmentation {
    std::vector<Segment> segments;
    std::vector<double> breakpoints;
    std::optional<double> k_ratio;  // second regime k over first, when both are hyperbolic
    double objective;               // total squared residual of the chosen split

    std::vector<const HyperbolicFit*> hyperbolic_fits() const {
        std::vector<const HyperbolicFit*> out;
        for (const auto& s : segments) {
            if (s.kind == SegmentKind::hyperbolic) out.push_back(&*s.fit);
        }
        return out;
    }
};

namespace detail {

struct SideFit {
    double ss;  // weighted squared residual of the unconstrained line
    std::optional<HyperbolicFit> fit;
};

inline double line_ss(std::span<const Observation> pts, Weighting weighting) {
    const auto sample = reciprocal_sample(pts, weighting);
    const auto line = weighted_line(sample.years, sample.reciprocals, sample.weights);
    double ss = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const double r = sample.reciprocals[i] - (line.intercept + line.slope * sample.years[i]);
        ss += sample.weights[i] * r * r;
    }
    return ss;
}

inline SideFit fit_side(std::span<const Observation> pts, Weighting weighting) {
    SideFit side{line_ss(pts, weighting), std::nullopt};
    try {
        side.fit = fit_points(pts, weighting);
    } catch (const FitError&) {
    }
    return side;
}

inline bool consistent(const Observation& p, const HyperbolicFit& fit, double tolerance) {
    const auto r = ReciprocalResidual::make(p.year, p.value, fit.model);
    return std::abs(standardised(r, ResidualScale::relative)) <= tolerance;
}

inline Segment side_segment(std::span<const Observation> pts, std::optional<HyperbolicFit> fit) {
    FitWindow window(pts.front().year, pts.back().year);
    if (fit) return {window, SegmentKind::hyperbolic, std::move(fit), std::nullopt};
    return {window, SegmentKind::unmodeled, std::nullopt, std::nullopt};
}

}  // namespace detail

/**
 * Splits the series into two hyperbolic regimes.
 *
 * Every split into a leading run of points and the remaining points, each
 * with at least min_points observations, is scored by the total squared
 * reciprocal residual of one least-squares line per side (weighted as
 * requested). The lowest score wins; scores that are exact to 1e-10 of the
 * largest reciprocal tie, and ties go to the earliest second-regime start.
 *
 * The boundary point pair is then joined: if the first point of the second
 * regime also lies on the first regime's curve (within tau times the robust
 * relative scale of both fits), it is shared by both regimes; otherwise if
 * the last point of the first regime lies on the second curve it is shared;
 * otherwise the interval between them becomes an unmodeled gap. A side whose
 * line is not a valid hyperbola becomes an unmodeled segment.
 */
inline RegimeSegmentation segment_two_hyperbolic(const YearValueSeries& series, std::size_t min_points = 3,
                                                 Weighting weighting = Weighting::uniform,
                                                 double tau = 3.0) {
    min_points = std::max<std::size_t>(min_points, 3);
    const auto pts = series.points();
    const std::size_t n = pts.size();
    if (n < 2 * min_points) {
        throw RegimeError(RegimeErrorKind::insufficient_points,
                          "two-regime segmentation needs at least " + std::to_string(2 * min_points) +
                              " points, series has " + std::to_string(n));
    }
    double max_reciprocal = 0.0;
    for (const auto& p : pts) max_reciprocal = std::max(max_reciprocal, 1.0 / p.value);
    const double exact_tol = static_cast<double>(n) * std::pow(1e-10 * max_reciprocal, 2);

    // Split after index `split`: left = [0, split], right = [split + 1, n).
    std::size_t best_split = 0;
    double best_score = std::numeric_limits<double>::infinity();
    for (std::size_t split = min_points - 1; split + min_points < n; ++split) {
        double score = detail::line_ss(pts.first(split + 1), weighting) +
                       detail::line_ss(pts.subspan(split + 1), weighting);
        if (score <= exact_tol) score = 0.0;
        if (score < best_score) {
            best_score = score;
            best_split = split;
        }
    }

    auto left_pts = pts.first(best_split + 1);
    auto right_pts = pts.subspan(best_split + 1);
    auto left = detail::fit_side(left_pts, weighting).fit;
    auto right = detail::fit_side(right_pts, weighting).fit;

    std::vector<double> z;
    for (const auto* f : {&left, &right}) {
        if (!*f) continue;
        for (const auto& r : (*f)->residuals) z.push_back(detail::standardised(r, ResidualScale::relative));
    }
    const double tolerance = std::max(tau * detail::robust_scale(z), 1e-9);

    RegimeSegmentation seg{{}, {}, std::nullopt, best_score};
    const Observation& last_left = left_pts.back();
    const Observation& first_right = right_pts.front();
    if (left && detail::consistent(first_right, *left, tolerance)) {
        left_pts = pts.first(best_split + 2);
        left = detail::fit_side(left_pts, weighting).fit;
        seg.breakpoints.push_back(first_right.year);
    } else if (right && detail::consistent(last_left, *right, tolerance)) {
        right_pts = pts.subspan(best_split);
        right = detail::fit_side(right_pts, weighting).fit;
        seg.breakpoints.push_back(last_left.year);
    }

    seg.segments.push_back(detail::side_segment(left_pts, std::move(left)));
    if (seg.breakpoints.empty()) {
        seg.segments.push_back(
            {FitWindow(last_left.year, first_right.year), SegmentKind::unmodeled, std::nullopt, std::nullopt});
        seg.breakpoints = {last_left.year, first_right.year};
    }
    seg.segments.push_back(detail::side_segment(right_pts, std::move(right)));

    const auto& first = seg.segments.front();
    const auto& second = seg.segments.back();
    if (first.fit && second.fit) seg.k_ratio = second.fit->model.k() / first.fit->model.k();
    return seg;
}

/**
 * Appends a diversion tail after the last segment. Observed points between
 * the end of the last segment and the diversion year become an unmodeled
 * bridge; otherwise the tail starts where the last segment ends.
 */
inline void append_diversion(RegimeSegmentation& seg, const YearValueSeries& series,
                             const DiversionFinding& finding) {
    const double tail_end = series.back().year;
    double start = seg.segments.empty() ? series.front().year : seg.segments.back().window.end_year;
    if (!(start < finding.year) || !(finding.year <= tail_end)) return;
    double last_on_trend = start;
    for (const auto& p : series) {
        if (p.year > start && p.year < finding.year) last_on_trend = p.year;
    }
    if (last_on_trend > start) {
        seg.segments.push_back({FitWindow(start, last_on_trend), SegmentKind::unmodeled, std::nullopt, std::nullopt});
        seg.breakpoints.push_back(start);
        start = last_on_trend;
    }
    if (!(start < tail_end)) return;
    seg.segments.push_back({FitWindow(start, tail_end), SegmentKind::diversion, std::nullopt, finding.direction});
    seg.breakpoints.push_back(start);
}

}  // namespace hypergrowth
