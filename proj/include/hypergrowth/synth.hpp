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
 * @file synth.hpp
 * @brief Seedable synthetic series with known ground truth.
 *
 * Every generator samples an exact curve at explicit years and optionally
 * multiplies each value by exp(N(0, sigma^2)). The normal deviates come from
 * a Box-Muller transform over std::mt19937_64, so a given spec and seed give
 * bit-identical output on every platform.
 */
#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <string_view>
#include <type_traits>
#include <variant>
#include <vector>

#include "errors.hpp"
#include "model.hpp"

namespace hypergrowth::synth {

/// S(t) = 1 / (a - k t).
struct Hyperbolic {
    double a;
    double k;
};

struct Constant {
    double level;
};

/// S(t) = level * exp(rate * (t - reference_year)).
struct Exponential {
    double level;
    double rate;
    double reference_year = 0.0;
};

/// Grows at pre_rate (default: flat) until break_year, then exponentially at
/// rate. Continuous at the break.
struct StagnationThenTakeoff {
    double level;
    double break_year;
    double rate;
    double pre_rate = 0.0;
};

/// Hyperbola (a, k) up to break_year, then a second hyperbola with slope
/// k * k_ratio joined continuously at the break.
struct SplicedTwoHyperbolic {
    double a;
    double k;
    double break_year;
    double k_ratio;

    double second_k() const noexcept { return k * k_ratio; }
    double second_a() const noexcept { return a + (second_k() - k) * break_year; }
};

/// Hyperbola (a, k) up to break_year, then exponential growth at
/// slow_factor times the hyperbolic growth rate reached at the break.
struct HyperbolicThenSlower {
    double a;
    double k;
    double break_year;
    double slow_factor;
};

using Shape = std::variant<Hyperbolic, Constant, Exponential, StagnationThenTakeoff,
                           SplicedTwoHyperbolic, HyperbolicThenSlower>;

struct GeneratorSpec {
    Shape shape;
    std::vector<double> sample_years;
    double noise_sigma = 0.0;
    std::uint64_t seed = 0;
    std::string label = "synthetic";
};

inline std::string_view kind_name(const Shape& shape) {
    return std::visit(
        [](const auto& s) -> std::string_view {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Hyperbolic>) return "hyperbolic";
            else if constexpr (std::is_same_v<T, Constant>) return "constant";
            else if constexpr (std::is_same_v<T, Exponential>) return "exponential";
            else if constexpr (std::is_same_v<T, StagnationThenTakeoff>) return "stagnation-then-takeoff";
            else if constexpr (std::is_same_v<T, SplicedTwoHyperbolic>) return "spliced-two-hyperbolic";
            else return "hyperbolic-then-slower";
        },
        shape);
}

namespace detail {

inline void require_positive(double v, const char* what) {
    if (!std::isfinite(v) || !(v > 0.0)) {
        throw InvalidSpec(std::string(what) + " must be a finite positive number");
    }
}

inline void require_before(double t, double singular, const char* what) {
    if (!(t < singular)) {
        throw InvalidSpec(std::string(what) + ": sample year " + std::to_string(t) +
                          " is at or past the singularity " + std::to_string(singular));
    }
}

inline double exact_value(const Hyperbolic& s, double t) {
    require_before(t, s.a / s.k, "hyperbolic");
    return 1.0 / (s.a - s.k * t);
}

inline double exact_value(const Constant& s, double) { return s.level; }

inline double exact_value(const Exponential& s, double t) {
    return s.level * std::exp(s.rate * (t - s.reference_year));
}

inline double exact_value(const StagnationThenTakeoff& s, double t) {
    const double dt = t - s.break_year;
    return s.level * std::exp(dt <= 0.0 ? s.pre_rate * dt : s.rate * dt);
}

inline double exact_value(const SplicedTwoHyperbolic& s, double t) {
    if (t <= s.break_year) {
        require_before(t, s.a / s.k, "spliced-two-hyperbolic (first regime)");
        return 1.0 / (s.a - s.k * t);
    }
    const double a2 = s.second_a();
    const double k2 = s.second_k();
    require_before(t, a2 / k2, "spliced-two-hyperbolic (second regime)");
    return 1.0 / (a2 - k2 * t);
}

inline double exact_value(const HyperbolicThenSlower& s, double t) {
    if (t <= s.break_year) return 1.0 / (s.a - s.k * t);
    const double at_break = 1.0 / (s.a - s.k * s.break_year);
    const double rate = s.slow_factor * s.k * at_break;
    return at_break * std::exp(rate * (t - s.break_year));
}

inline void validate(const Hyperbolic& s) {
    require_positive(s.a, "a");
    require_positive(s.k, "k");
}
inline void validate(const Constant& s) { require_positive(s.level, "level"); }
inline void validate(const Exponential& s) {
    require_positive(s.level, "level");
    require_positive(s.rate, "rate");
    if (!std::isfinite(s.reference_year)) throw InvalidSpec("reference_year must be finite");
}
inline void validate(const StagnationThenTakeoff& s) {
    require_positive(s.level, "level");
    require_positive(s.rate, "rate");
    if (!std::isfinite(s.break_year)) throw InvalidSpec("break_year must be finite");
    if (!std::isfinite(s.pre_rate) || s.pre_rate < 0.0) {
        throw InvalidSpec("pre_rate must be finite and non-negative");
    }
}
inline void validate(const SplicedTwoHyperbolic& s) {
    require_positive(s.a, "a");
    require_positive(s.k, "k");
    require_positive(s.k_ratio, "k_ratio");
    if (!std::isfinite(s.break_year)) throw InvalidSpec("break_year must be finite");
    require_before(s.break_year, s.a / s.k, "spliced-two-hyperbolic break");
}
inline void validate(const HyperbolicThenSlower& s) {
    require_positive(s.a, "a");
    require_positive(s.k, "k");
    if (!std::isfinite(s.break_year)) throw InvalidSpec("break_year must be finite");
    if (!std::isfinite(s.slow_factor) || s.slow_factor < 0.0 || !(s.slow_factor < 1.0)) {
        throw InvalidSpec("slow_factor must lie in [0, 1)");
    }
    require_before(s.break_year, s.a / s.k, "hyperbolic-then-slower break");
}

/// Standard normal deviates from mt19937_64 via Box-Muller.
class NormalStream {
public:
    explicit NormalStream(std::uint64_t seed) : engine_(seed) {}

    double next() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = uniform_open();
        const double u2 = uniform_open();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * std::numbers::pi * u2;
        spare_ = radius * std::sin(angle);
        has_spare_ = true;
        return radius * std::cos(angle);
    }

private:
    // Uniform on (0, 1) with 53 random bits.
    double uniform_open() {
        return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
    }

    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace detail

/// Exact (noise-free) value of the shape at year t.
inline double exact_value(const Shape& shape, double t) {
    return std::visit([t](const auto& s) { return detail::exact_value(s, t); }, shape);
}

inline YearValueSeries generate(const GeneratorSpec& spec) {
    std::visit([](const auto& s) { detail::validate(s); }, spec.shape);
    if (spec.sample_years.empty()) throw InvalidSpec("sample_years is empty");
    for (std::size_t i = 1; i < spec.sample_years.size(); ++i) {
        if (!(spec.sample_years[i - 1] < spec.sample_years[i])) {
            throw InvalidSpec("sample_years must be strictly increasing");
        }
    }
    if (!std::isfinite(spec.noise_sigma) || spec.noise_sigma < 0.0) {
        throw InvalidSpec("noise sigma must be finite and non-negative");
    }

    std::vector<Observation> points;
    points.reserve(spec.sample_years.size());
    for (double t : spec.sample_years) {
        points.push_back({t, exact_value(spec.shape, t)});
    }
    if (spec.noise_sigma > 0.0) {
        detail::NormalStream normal(spec.seed);
        for (auto& p : points) p.value *= std::exp(spec.noise_sigma * normal.next());
    }
    for (const auto& p : points) {
        if (!std::isfinite(p.value) || !(p.value > 0.0)) {
            throw InvalidSpec("generated a non-finite or non-positive value at year " +
                              std::to_string(p.year));
        }
    }
    return YearValueSeries(std::move(points), spec.label);
}

/// Inclusive list first, first+step, ..., up to last.
inline std::vector<double> year_range(double first, double last, double step = 1.0) {
    std::vector<double> out;
    for (long i = 0;; ++i) {
        const double t = first + static_cast<double>(i) * step;
        if (t > last) break;
        out.push_back(t);
    }
    return out;
}

/// Sparse historical sampling grid: AD 1, 1000, 1500, 1600, 1700, 1820, 1870,
/// 1900, 1913, then every year 1950-2008.
inline std::vector<double> maddison_year_grid() {
    std::vector<double> grid{1, 1000, 1500, 1600, 1700, 1820, 1870, 1900, 1913};
    for (int y = 1950; y <= 2008; ++y) grid.push_back(y);
    return grid;
}

}  // namespace hypergrowth::synth
