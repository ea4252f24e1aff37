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
 * @file model.hpp
 * @brief Hyperbolic growth model S(t) = 1 / (a - k t) and the year/value
 *        series it is fitted to.
 *
 * Years are real-valued calendar years (AD 1 = 1). Values are GDP in billions
 * of 1990 Geary-Khamis dollars; any unit conversion happens at ingestion.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace hypergrowth {

struct Observation {
    double year;
    double value;

    friend bool operator==(const Observation&, const Observation&) = default;
};

/**
 * Ordered (year, value) observations. Years strictly increase, values are
 * strictly positive, and there is at least one point. Gaps between years are
 * allowed and never interpolated.
 */
class YearValueSeries {
public:
    YearValueSeries(std::vector<Observation> points, std::string label = {})
        : points_(std::move(points)), label_(std::move(label)) {
        if (points_.empty()) {
            throw InvalidArgument("series '" + label_ + "' is empty");
        }
        for (std::size_t i = 0; i < points_.size(); ++i) {
            const auto& p = points_[i];
            if (!std::isfinite(p.year) || !std::isfinite(p.value)) {
                throw InvalidArgument("series '" + label_ + "' has a non-finite entry");
            }
            if (!(p.value > 0.0)) {
                throw InvalidArgument("series '" + label_ + "' has a non-positive value at year " +
                                      std::to_string(p.year));
            }
            if (i > 0 && !(points_[i - 1].year < p.year)) {
                throw InvalidArgument("series '" + label_ +
                                      "' years are not strictly increasing at year " +
                                      std::to_string(p.year));
            }
        }
    }

    std::span<const Observation> points() const noexcept { return points_; }
    const std::string& label() const noexcept { return label_; }
    std::size_t size() const noexcept { return points_.size(); }
    const Observation& operator[](std::size_t i) const { return points_[i]; }
    auto begin() const noexcept { return points_.begin(); }
    auto end() const noexcept { return points_.end(); }
    const Observation& front() const noexcept { return points_.front(); }
    const Observation& back() const noexcept { return points_.back(); }

    std::vector<double> years() const {
        std::vector<double> out;
        out.reserve(points_.size());
        for (const auto& p : points_) out.push_back(p.year);
        return out;
    }

    std::vector<double> values() const {
        std::vector<double> out;
        out.reserve(points_.size());
        for (const auto& p : points_) out.push_back(p.value);
        return out;
    }

    /// Number of observations with lo <= year <= hi.
    std::size_t count_between(double lo, double hi) const {
        return static_cast<std::size_t>(
            std::count_if(points_.begin(), points_.end(),
                          [&](const Observation& p) { return p.year >= lo && p.year <= hi; }));
    }

    /// Observations with lo <= year <= hi. Throws InvalidArgument when none remain.
    YearValueSeries between(double lo, double hi) const {
        std::vector<Observation> kept;
        for (const auto& p : points_) {
            if (p.year >= lo && p.year <= hi) kept.push_back(p);
        }
        return YearValueSeries(std::move(kept), label_);
    }

    YearValueSeries shifted(double dt) const {
        auto pts = points_;
        for (auto& p : pts) p.year += dt;
        return YearValueSeries(std::move(pts), label_);
    }

    YearValueSeries scaled(double factor) const {
        auto pts = points_;
        for (auto& p : pts) p.value *= factor;
        return YearValueSeries(std::move(pts), label_);
    }

    friend bool operator==(const YearValueSeries& l, const YearValueSeries& r) {
        return l.points_ == r.points_ && l.label_ == r.label_;
    }

private:
    std::vector<Observation> points_;
    std::string label_;
};

/**
 * Parameters of S(t) = 1 / (a - k t). Both a and k are strictly positive, so
 * the reciprocal 1/S = a - k t is a decreasing line that reaches zero at the
 * singularity t = a / k.
 */
class HyperbolicModel {
public:
    HyperbolicModel(double a, double k) : a_(a), k_(k) {
        if (!std::isfinite(a) || !std::isfinite(k) || !(a > 0.0) || !(k > 0.0)) {
            throw InvalidArgument("hyperbolic model requires finite a > 0 and k > 0");
        }
    }

    double a() const noexcept { return a_; }
    double k() const noexcept { return k_; }

    /// Value of the reciprocal line a - k t. Defined for every t.
    double reciprocal_at(double t) const noexcept { return a_ - k_ * t; }

    double singularity() const noexcept { return a_ / k_; }

    friend bool operator==(const HyperbolicModel&, const HyperbolicModel&) = default;

private:
    double a_;
    double k_;
};

struct ReciprocalResidual {
    double year;
    double observed_reciprocal;
    double fitted_reciprocal;
    double delta;  // observed_reciprocal - fitted_reciprocal

    static ReciprocalResidual make(double year, double observed_value,
                                   const HyperbolicModel& model) {
        const double obs = 1.0 / observed_value;
        const double fit = model.reciprocal_at(year);
        return {year, obs, fit, obs - fit};
    }
};

/// S(t). Throws DomainError at or after the singularity.
inline double evaluate(const HyperbolicModel& model, double t) {
    const double denom = model.reciprocal_at(t);
    if (!(denom > 0.0)) {
        throw DomainError("hyperbolic model evaluated at or past its singularity (t = " +
                          std::to_string(t) + ", singularity = " +
                          std::to_string(model.singularity()) + ")");
    }
    return 1.0 / denom;
}

/// Replaces every value v with 1/v. Applying it twice returns the input.
inline YearValueSeries reciprocal_transform(const YearValueSeries& series) {
    std::vector<Observation> pts(series.begin(), series.end());
    for (auto& p : pts) p.value = 1.0 / p.value;
    return YearValueSeries(std::move(pts), series.label());
}

inline double singularity(const HyperbolicModel& model) noexcept { return model.singularity(); }

/// 1/s2 - 1/s1 written as -(s2 - s1) / (s1 s2). Small S magnifies the difference.
inline double reciprocal_delta(double s1, double s2) {
    if (!(s1 > 0.0) || !(s2 > 0.0)) {
        throw InvalidArgument("reciprocal_delta requires positive values");
    }
    return -(s2 - s1) / (s1 * s2);
}

/// Signed percent deviation of an observation from the model, relative to the
/// fitted value. Positive means the observation lies above the curve.
inline double relative_deviation(const Observation& point, const HyperbolicModel& model) {
    const double fitted = evaluate(model, point.year);
    return 100.0 * (point.value - fitted) / fitted;
}

/// Half-up rounding to an integer year.
inline long round_year(double year) noexcept { return static_cast<long>(std::floor(year + 0.5)); }

}  // namespace hypergrowth
