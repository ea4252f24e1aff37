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
 * @file acceptance.hpp
 * @brief Self-contained acceptance checks against the published summary
 *        values and against synthetic ground truth.
 *
 * Every tolerance, trial count and seed is fixed here. Check 5 needs the
 * historical GDP data as a long CSV and is skipped without it.
 */
#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fit.hpp"
#include "ingest.hpp"
#include "model.hpp"
#include "regime.hpp"
#include "synth.hpp"
#include "takeoff.hpp"

namespace hypergrowth::acceptance {

/// One parameter row of the published summary table.
struct PublishedRow {
    const char* region;
    double a;
    double k;
    double range_start;
    double range_end;
    long singularity;
    std::optional<long> proximity;
    std::optional<double> diversion_year;  // from the regional discussion
};

inline const std::vector<PublishedRow>& published_rows() {
    static const std::vector<PublishedRow> rows{
        {"World", 1.684e-2, 8.539e-6, 1000, 1955, 1972, 17, 1955},
        {"Western Europe", 9.859e-2, 5.112e-5, 1500, 1900, 1929, 29, 1900},
        {"Western Europe (4)", 3.821e-1, 1.986e-4, 1, 1875, 1923, 48, 1875},
        {"Eastern Europe", 7.749e-1, 4.048e-4, 1000, 1890, 1915, 25, 1890},
        {"Former USSR", 6.547e-1, 3.452e-4, 1, 1870, 1897, 27, 1870},
        {"Asia", 2.303e-2, 1.129e-5, 1000, 1950, 2040, 90, 1950},
        {"Africa (first regime)", 1.244e-1, 5.030e-5, 1, 1820, 2473, std::nullopt, std::nullopt},
        {"Africa", 4.192e-1, 2.126e-4, 1820, 1950, 1972, 22, 1950},
        {"Latin America (first regime)", 4.421e-1, 2.093e-4, 1, 1500, 2113, std::nullopt, std::nullopt},
        {"Latin America", 1.570e0, 8.224e-4, 1600, 1870, 1910, 40, 1870},
    };
    return rows;
}

enum class Status { pass, fail, skipped };

struct CheckResult {
    int id;
    std::string title;
    Status status;
    std::string detail;
};

struct Options {
    std::string maddison_csv;  // long CSV; empty skips check 5
    std::string world_entity = "World";
};

namespace detail {

inline std::string fmt(const char* f, double v) {
    char buf[128];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

inline double rel_err(double got, double want) { return std::abs(got - want) / std::abs(want); }

}  // namespace detail

/// 1. round(a/k) reproduces each published singularity within one year.
inline CheckResult check_singularities() {
    CheckResult r{1, "singularity arithmetic (round(a/k) vs published, +/-1 yr)", Status::pass, ""};
    for (const auto& row : published_rows()) {
        const long got = round_year(singularity(HyperbolicModel(row.a, row.k)));
        r.detail += std::string(row.region) + "=" + std::to_string(got) + " ";
        if (std::abs(got - row.singularity) > 1) r.status = Status::fail;
    }
    return r;
}

/// 2. Proximity from the published singularities and the diversion years.
inline CheckResult check_proximities() {
    CheckResult r{2, "proximity reproduction (exact from published singularity, +/-1 from a/k)", Status::pass, ""};
    for (const auto& row : published_rows()) {
        if (!row.proximity) continue;
        const long exact = proximity(HyperbolicModel(static_cast<double>(row.singularity), 1.0), *row.diversion_year);
        const long from_model = proximity(HyperbolicModel(row.a, row.k), *row.diversion_year);
        r.detail += std::string(row.region) + "=" + std::to_string(exact) + "/" + std::to_string(from_model) + " ";
        if (exact != *row.proximity || std::abs(from_model - *row.proximity) > 1) r.status = Status::fail;
    }
    return r;
}

/// 3. Second-regime over first-regime k for Africa (4.2) and Latin America (3.9).
inline CheckResult check_k_ratios() {
    const auto& rows = published_rows();
    const double africa = rows[7].k / rows[6].k;
    const double latin = rows[9].k / rows[8].k;
    const bool ok = std::abs(africa - 4.2) <= 0.05 && std::abs(latin - 3.9) <= 0.05;
    return {3, "k-ratio claims (4.2 and 3.9 within 0.05)", ok ? Status::pass : Status::fail,
            "africa=" + detail::fmt("%.4f", africa) + " latin_america=" + detail::fmt("%.4f", latin)};
}

/// 4. Parameter recovery on the sparse historical grid.
inline CheckResult check_parameter_recovery() {
    CheckResult r{4, "parameter recovery (noiseless 1e-9; 1% noise within 2% in >=95% of 1000)", Status::pass, ""};
    const synth::Hyperbolic truth{1.684e-2, 8.0e-6};
    const auto grid = synth::maddison_year_grid();
    double worst = 0.0;
    for (auto w : {Weighting::uniform, Weighting::direct}) {
        const auto fit = fit_hyperbolic(synth::generate({truth, grid}), w);
        worst = std::max({worst, detail::rel_err(fit.model.a(), truth.a), detail::rel_err(fit.model.k(), truth.k)});
    }
    if (worst >= 1e-9) r.status = Status::fail;
    r.detail = "noiseless max rel err=" + detail::fmt("%.2e", worst);

    constexpr int trials = 1000;
    int within = 0;
    for (int i = 0; i < trials; ++i) {
        const auto series = synth::generate({truth, grid, 0.01, 4000u + static_cast<std::uint64_t>(i)});
        const auto fit = fit_hyperbolic(series);
        if (detail::rel_err(fit.model.a(), truth.a) < 0.02 && detail::rel_err(fit.model.k(), truth.k) < 0.02) ++within;
    }
    if (within < 950) r.status = Status::fail;
    r.detail += " noisy within 2%=" + std::to_string(within) + "/" + std::to_string(trials);
    return r;
}

/// 5. World refit against the real data (optional).
inline CheckResult check_world_data(const Options& opts) {
    CheckResult r{5, "world data reproduction (a,k within 5%; diversion 1950-1960; AD 1 deviation 70-85%)",
                  Status::skipped, "no historical data CSV supplied"};
    if (opts.maddison_csv.empty()) return r;
    std::ifstream in(opts.maddison_csv, std::ios::binary);
    if (!in) {
        r.status = Status::fail;
        r.detail = "cannot open " + opts.maddison_csv;
        return r;
    }
    std::stringstream buf;
    buf << in.rdbuf();
    try {
        const auto table = parse_long_csv(buf.str());
        const auto series = build_region_series(table, {"World", {opts.world_entity}});
        const auto fit = fit_hyperbolic(series, FitWindow(1000, 1955));
        const auto& pub = published_rows()[0];
        const double ea = detail::rel_err(fit.model.a(), pub.a);
        const double ek = detail::rel_err(fit.model.k(), pub.k);
        const auto div = detect_diversion(series, fit);
        std::optional<double> dev_ad1;
        for (const auto& p : series) {
            if (p.year == 1.0) dev_ad1 = relative_deviation(p, fit.model);
        }
        const bool ok = ea <= 0.05 && ek <= 0.05 && div && div->year >= 1950 && div->year <= 1960 && dev_ad1 &&
                        *dev_ad1 >= 70.0 && *dev_ad1 <= 85.0;
        r.status = ok ? Status::pass : Status::fail;
        r.detail = "a=" + detail::fmt("%.4e", fit.model.a()) + " k=" + detail::fmt("%.4e", fit.model.k()) +
                   " diversion=" + (div ? detail::fmt("%.0f", div->year) : std::string("none")) +
                   " AD1 deviation=" + (dev_ad1 ? detail::fmt("%.1f%%", *dev_ad1) : std::string("n/a"));
    } catch (const Error& e) {
        r.status = Status::fail;
        r.detail = e.what();
    }
    return r;
}

/// Synthetic scenario for check 6: hyperbola with singularity 1965 that
/// slows to a quarter of its growth rate from 1955, sampled annually.
inline synth::GeneratorSpec diversion_scenario(double sigma, std::uint64_t seed) {
    const double a = 1.684e-2;
    return {synth::HyperbolicThenSlower{a, a / 1965.0, 1955.0, 0.25}, synth::year_range(1850, 1970), sigma, seed};
}

inline synth::GeneratorSpec on_model_scenario(double sigma, std::uint64_t seed) {
    const double a = 1.684e-2;
    return {synth::Hyperbolic{a, a / 2050.0}, synth::year_range(1850, 1970), sigma, seed};
}

/// 6. Diversion detection on spliced annual series.
inline CheckResult check_diversion_detection() {
    CheckResult r{6, "diversion detection (within 1 yr in >=95%, always slower; no finding on-model in >=99%)",
                  Status::pass, ""};
    constexpr int trials = 1000;
    const FitWindow window(1850, 1955);
    int hits = 0, slower = 0, found = 0, quiet = 0;
    for (int i = 0; i < trials; ++i) {
        const auto series = synth::generate(diversion_scenario(0.01, 6000u + static_cast<std::uint64_t>(i)));
        const auto finding = detect_diversion(series, fit_hyperbolic(series, window));
        if (finding) {
            ++found;
            if (finding->direction == Direction::slower) ++slower;
            if (std::abs(finding->year - 1955.0) <= 1.0) ++hits;
        }
        const auto pure = synth::generate(on_model_scenario(0.01, 16000u + static_cast<std::uint64_t>(i)));
        if (!detect_diversion(pure, fit_hyperbolic(pure, window))) ++quiet;
    }
    if (hits < 950 || slower != found || quiet < 990) r.status = Status::fail;
    r.detail = "within 1 yr=" + std::to_string(hits) + "/" + std::to_string(trials) +
               " slower=" + std::to_string(slower) + "/" + std::to_string(found) +
               " on-model quiet=" + std::to_string(quiet) + "/" + std::to_string(trials);
    return r;
}

/// Two hyperbolic regimes with a 4.2x faster second slope from 1820.
inline synth::SplicedTwoHyperbolic spliced_scenario() { return {1.244e-1, 5.030e-5, 1820.0, 4.2}; }

/// 7. Two-regime segmentation.
inline CheckResult check_segmentation() {
    CheckResult r{7, "two-regime segmentation (noiseless exact; k-ratio within 1% at sigma=0.01)", Status::pass, ""};
    const auto shape = spliced_scenario();
    std::vector<double> grid;
    for (double y : synth::maddison_year_grid()) {
        if (y <= 1950) grid.push_back(y);
    }
    const auto seg = segment_two_hyperbolic(synth::generate({shape, grid}));
    const auto fits = seg.hyperbolic_fits();
    double worst = 1.0;
    bool exact_break = seg.breakpoints.size() == 1 && seg.breakpoints[0] == shape.break_year;
    if (fits.size() == 2) {
        worst = std::max({detail::rel_err(fits[0]->model.a(), shape.a), detail::rel_err(fits[0]->model.k(), shape.k),
                          detail::rel_err(fits[1]->model.a(), shape.second_a()),
                          detail::rel_err(fits[1]->model.k(), shape.second_k())});
    }
    if (!exact_break || worst >= 1e-9) r.status = Status::fail;
    r.detail = std::string("noiseless breakpoint ") + (exact_break ? "exact" : "wrong") +
               " max rel err=" + detail::fmt("%.2e", worst);

    constexpr int trials = 100;
    const auto annual = synth::year_range(1, 1950);
    int within = 0;
    double worst_ratio = 0.0;
    for (int i = 0; i < trials; ++i) {
        const auto noisy = segment_two_hyperbolic(synth::generate({shape, annual, 0.01, 7000u + static_cast<std::uint64_t>(i)}));
        if (noisy.k_ratio) {
            const double e = detail::rel_err(*noisy.k_ratio, shape.k_ratio);
            worst_ratio = std::max(worst_ratio, e);
            if (e <= 0.01) ++within;
        }
    }
    if (within != trials) r.status = Status::fail;
    r.detail += " noisy k-ratio within 1%=" + std::to_string(within) + "/" + std::to_string(trials) +
                " (worst " + detail::fmt("%.3f%%", 100.0 * worst_ratio) + ")";
    return r;
}

inline synth::GeneratorSpec takeoff_scenario(double sigma, std::uint64_t seed) {
    return {synth::StagnationThenTakeoff{100.0, 1750.0, 0.02}, synth::maddison_year_grid(), sigma, seed};
}

inline synth::GeneratorSpec hyperbolic_takeoff_control(double sigma, std::uint64_t seed) {
    const double a = 1.684e-2;
    return {synth::Hyperbolic{a, a / 2100.0}, synth::maddison_year_grid(), sigma, seed};
}

/// 8. Takeoff verdicts and their invariance.
inline CheckResult check_takeoff_verdicts() {
    CheckResult r{8, "takeoff verdicts (stagnation-then-takeoff positive, hyperbolic/constant negative, stable)", Status::pass, ""};
    const auto verdict = [](const YearValueSeries& s, double predicted) {
        return takeoff_test(s, widened_to_data(s, {predicted, 50.0}));
    };
    const auto takeoff = synth::generate(takeoff_scenario(0.0, 0));
    const auto hyper = synth::generate(hyperbolic_takeoff_control(0.0, 0));
    const auto flat = synth::generate({synth::Constant{100.0}, synth::maddison_year_grid()});

    const auto t = verdict(takeoff, 1750);
    if (!t.positive || std::abs(t.timing.value - 1750.0) > 50.0) r.status = Status::fail;
    r.detail = "takeoff=" + std::string(t.positive ? "positive" : "negative") +
               " break=" + detail::fmt("%.0f", t.timing.value);
    const bool h = verdict(hyper, 1750).positive;
    const bool c = verdict(flat, 1750).positive;
    if (h || c) r.status = Status::fail;
    r.detail += std::string(" hyperbolic=") + (h ? "positive" : "negative") + " constant=" + (c ? "positive" : "negative");

    bool stable = true;
    for (const auto* s : {&takeoff, &hyper, &flat}) {
        const bool base = verdict(*s, 1750).positive;
        stable = stable && verdict(s->scaled(1e3), 1750).positive == base;
        stable = stable && verdict(s->shifted(100.0), 1850).positive == base;
        stable = stable && verdict(s->shifted(-100.0), 1650).positive == base;
    }
    if (!stable) r.status = Status::fail;
    r.detail += std::string(" invariance=") + (stable ? "stable" : "unstable");
    return r;
}

/// 9. The difference identity for 10^6 random positive pairs, measured
/// relative to the larger reciprocal.
inline CheckResult check_reciprocal_identity() {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> log_value(-3.0, 6.0);
    double worst = 0.0;
    for (int i = 0; i < 1'000'000; ++i) {
        const double s1 = std::pow(10.0, log_value(rng));
        const double s2 = std::pow(10.0, log_value(rng));
        const double direct = 1.0 / s2 - 1.0 / s1;
        const double err = std::abs(reciprocal_delta(s1, s2) - direct) / std::max(1.0 / s1, 1.0 / s2);
        worst = std::max(worst, err);
    }
    return {9, "reciprocal difference identity (10^6 pairs, 1e-12 relative)", worst <= 1e-12 ? Status::pass : Status::fail,
            "worst rel err=" + detail::fmt("%.2e", worst)};
}

inline std::vector<std::function<CheckResult()>> all_checks(const Options& opts = {}) {
    return {check_singularities,     check_proximities,         check_k_ratios,
            check_parameter_recovery, [opts] { return check_world_data(opts); },
            check_diversion_detection, check_segmentation,       check_takeoff_verdicts,
            check_reciprocal_identity};
}

inline std::string status_text(Status s) {
    switch (s) {
        case Status::pass: return "PASS";
        case Status::fail: return "FAIL";
        default: return "SKIP";
    }
}

inline std::string format_line(const CheckResult& r) {
    return "[" + status_text(r.status) + "] " + std::to_string(r.id) + ". " + r.title + " -- " + r.detail;
}

}  // namespace hypergrowth::acceptance
