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
 * @file report.hpp
 * @brief Region configuration, the per-region analysis pipeline, and report
 *        rendering (JSON, CSV, markdown).
 */
#pragma once

#include <cmath>
#include <cstdio>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "errors.hpp"
#include "fit.hpp"
#include "ingest.hpp"
#include "model.hpp"
#include "regime.hpp"
#include "takeoff.hpp"

namespace hypergrowth {

/// A region plus the analysis choices made for it.
struct RegionSpec {
    RegionDefinition definition;
    std::optional<FitWindow> window;  // fit window; scanned when absent
    std::optional<FitWindow> span;    // restricts window scanning and segmentation
    bool two_regime = false;
    std::vector<double> predicted_years;  // takeoff hypotheses; none = not tested
};

struct AnalysisConfig {
    Weighting weighting = Weighting::uniform;
    std::size_t scan_min_points = 5;
    std::size_t segment_min_points = 3;
    DiversionOptions diversion;
    double takeoff_halfwidth = 50.0;
    TakeoffThresholds takeoff;
    std::vector<double> default_predicted_years;  // used by regions that list none
};

namespace detail {

inline bool parse_bool(std::string_view v, std::size_t line) {
    if (v == "true" || v == "yes" || v == "1") return true;
    if (v == "false" || v == "no" || v == "0") return false;
    throw ParseError(line, "expected true/false, got '" + std::string(v) + "'");
}

inline std::vector<std::string> parse_list(std::string_view v) {
    std::vector<std::string> out;
    for (const auto& f : split_fields(v, ',')) {
        const auto t = trim(f);
        if (!t.empty()) out.emplace_back(t);
    }
    return out;
}

inline double parse_required_number(std::string_view v, std::size_t line, const char* what) {
    const auto n = parse_number(v);
    if (!n) throw ParseError(line, std::string("bad ") + what + " '" + std::string(v) + "'");
    return *n;
}

}  // namespace detail

/// Parses "START:END" into an inclusive window.
inline FitWindow parse_window(std::string_view text) {
    const auto colon = text.find(':');
    if (colon == std::string_view::npos) throw InvalidArgument("window must look like START:END");
    const auto lo = detail::parse_number(text.substr(0, colon));
    const auto hi = detail::parse_number(text.substr(colon + 1));
    if (!lo || !hi) throw InvalidArgument("window must look like START:END");
    return FitWindow(*lo, *hi);
}

/**
 * Region configuration file. Plain `key = value` lines, `#` starts a comment,
 * and each `region = NAME` line opens a new region block:
 *
 *     region = Africa
 *     members = Africa            # comma separated source entities
 *     require_complete = true
 *     unit_scale = 1
 *     span = 1:1950               # optional
 *     window = 1000:1955          # optional
 *     two_regime = true           # optional
 *     predicted_years = 1900      # optional, comma separated
 */
inline std::vector<RegionSpec> parse_region_config(std::string_view text) {
    std::vector<RegionSpec> regions;
    for (const auto& [number, raw] : detail::lines_of(text)) {
        auto line = raw.substr(0, raw.find('#'));
        line = detail::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ParseError(number, "expected 'key = value'");
        const auto key = detail::trim(line.substr(0, eq));
        const auto value = detail::trim(line.substr(eq + 1));
        if (key == "region") {
            if (value.empty()) throw ParseError(number, "empty region name");
            for (const auto& r : regions) {
                if (r.definition.name == value) throw ParseError(number, "duplicate region '" + std::string(value) + "'");
            }
            regions.push_back({});
            regions.back().definition.name = std::string(value);
            continue;
        }
        if (regions.empty()) throw ParseError(number, "'" + std::string(key) + "' before any 'region ='");
        auto& r = regions.back();
        try {
            if (key == "members") {
                r.definition.members = detail::parse_list(value);
            } else if (key == "require_complete") {
                r.definition.require_complete = detail::parse_bool(value, number);
            } else if (key == "unit_scale") {
                r.definition.unit_scale = detail::parse_required_number(value, number, "unit_scale");
                if (!(r.definition.unit_scale > 0.0)) throw ParseError(number, "unit_scale must be positive");
            } else if (key == "aggregation") {
                if (value != "sum") throw ParseError(number, "only 'sum' aggregation is supported");
            } else if (key == "window") {
                r.window = parse_window(value);
            } else if (key == "span") {
                r.span = parse_window(value);
            } else if (key == "two_regime") {
                r.two_regime = detail::parse_bool(value, number);
            } else if (key == "predicted_years") {
                r.predicted_years.clear();
                for (const auto& y : detail::parse_list(value)) {
                    r.predicted_years.push_back(detail::parse_required_number(y, number, "predicted year"));
                }
            } else {
                throw ParseError(number, "unknown key '" + std::string(key) + "'");
            }
        } catch (const InvalidArgument& e) {
            throw ParseError(number, e.what());
        }
    }
    for (const auto& r : regions) {
        if (r.definition.members.empty()) throw ConfigError("region '" + r.definition.name + "' has no members");
    }
    return regions;
}

/// Outcome of the takeoff search for a row: "X" when every tested
/// hypothesis was negative, otherwise the break year of a positive test.
struct TakeoffCell {
    bool positive;
    std::optional<double> year;

    friend bool operator==(const TakeoffCell&, const TakeoffCell&) = default;
};

struct DiversionCell {
    double year;
    Direction direction;

    friend bool operator==(const DiversionCell&, const DiversionCell&) = default;
};

struct AnalysisReportRow {
    std::string region;
    int regime = 1;
    double a;
    double k;
    double range_start;
    double range_end;
    long singularity;  // round(a / k)
    std::optional<long> proximity;
    std::optional<TakeoffCell> takeoff;  // empty when not tested on this row
    std::optional<DiversionCell> diversion;
    Weighting weighting = Weighting::uniform;

    friend bool operator==(const AnalysisReportRow&, const AnalysisReportRow&) = default;
};

struct RegionError {
    std::string region;
    std::string message;

    friend bool operator==(const RegionError&, const RegionError&) = default;
};

struct AnalysisReport {
    std::vector<AnalysisReportRow> rows;
    std::vector<RegionError> errors;

    bool ok() const noexcept { return errors.empty(); }

    friend bool operator==(const AnalysisReport&, const AnalysisReport&) = default;
};

/// Everything computed for one region, for callers that need more than rows.
struct RegionAnalysis {
    YearValueSeries series;
    std::vector<HyperbolicFit> fits;  // one per hyperbolic regime, in time order
    std::optional<RegimeSegmentation> segmentation;
    std::optional<DiversionFinding> diversion;
    std::vector<TakeoffTestResult> takeoff;
    std::vector<std::string> takeoff_errors;
};

inline RegionAnalysis analyse_region(const YearValueSeries& series, const RegionSpec& spec,
                                     const AnalysisConfig& config) {
    RegionAnalysis out{series, {}, std::nullopt, std::nullopt, {}, {}};
    const YearValueSeries scoped =
        spec.span ? series.between(spec.span->start_year, spec.span->end_year) : series;

    if (spec.two_regime) {
        out.segmentation = segment_two_hyperbolic(scoped, config.segment_min_points, config.weighting,
                                                  config.diversion.tau);
        for (const auto* f : out.segmentation->hyperbolic_fits()) out.fits.push_back(*f);
        if (out.fits.empty()) throw FitError(FitErrorKind::non_hyperbolic, "no hyperbolic regime found");
    } else if (spec.window) {
        out.fits.push_back(fit_hyperbolic(series, *spec.window, config.weighting));
    } else {
        auto ranked = scan_windows(scoped, config.scan_min_points, config.weighting);
        if (ranked.empty()) throw FitError(FitErrorKind::non_hyperbolic, "no window admits a hyperbolic fit");
        out.fits.push_back(std::move(ranked.front()));
    }

    out.diversion = detect_diversion(series, out.fits.back(), config.diversion);
    if (out.segmentation && out.diversion) append_diversion(*out.segmentation, series, *out.diversion);

    const auto& predicted = spec.predicted_years.empty() ? config.default_predicted_years : spec.predicted_years;
    if (!predicted.empty()) {
        // Test only the pre-diversion part of the series.
        double last = series.back().year;
        if (out.diversion) {
            for (const auto& p : series) {
                if (p.year < out.diversion->year) last = p.year;
            }
        }
        const auto pre = series.between(series.front().year, last);
        for (double year : predicted) {
            try {
                const auto h = widened_to_data(pre, {year, config.takeoff_halfwidth});
                out.takeoff.push_back(takeoff_test(pre, h, config.takeoff));
            } catch (const Error& e) {
                out.takeoff_errors.push_back(e.what());
            }
        }
    }
    return out;
}

inline std::vector<AnalysisReportRow> report_rows(const RegionAnalysis& analysis, const std::string& region,
                                                  Weighting weighting) {
    std::vector<AnalysisReportRow> rows;
    for (std::size_t i = 0; i < analysis.fits.size(); ++i) {
        const auto& fit = analysis.fits[i];
        AnalysisReportRow row{region,
                              static_cast<int>(i + 1),
                              fit.model.a(),
                              fit.model.k(),
                              fit.window.start_year,
                              fit.window.end_year,
                              round_year(fit.model.singularity()),
                              std::nullopt,
                              std::nullopt,
                              std::nullopt,
                              weighting};
        if (i + 1 == analysis.fits.size()) {
            if (analysis.diversion) {
                row.proximity = analysis.diversion->proximity_years;
                row.diversion = DiversionCell{analysis.diversion->year, analysis.diversion->direction};
            }
            if (!analysis.takeoff.empty()) {
                TakeoffCell cell{false, std::nullopt};
                for (const auto& t : analysis.takeoff) {
                    if (t.positive) {
                        cell = {true, t.timing.value};
                        break;
                    }
                }
                row.takeoff = cell;
            }
        }
        rows.push_back(row);
    }
    return rows;
}

/**
 * Runs every configured region: window choice (configured or scanned) or
 * two-regime segmentation, diversion detection, and takeoff tests. Regions
 * that fail are reported in `errors` without stopping the others; output
 * order follows the configuration.
 */
inline AnalysisReport run_analysis(const DatasetTable& table, const std::vector<RegionSpec>& regions,
                                   const AnalysisConfig& config = {}) {
    AnalysisReport report;
    for (const auto& spec : regions) {
        try {
            const auto series = build_region_series(table, spec.definition);
            const auto analysis = analyse_region(series, spec, config);
            for (auto& row : report_rows(analysis, spec.definition.name, config.weighting)) {
                report.rows.push_back(std::move(row));
            }
        } catch (const Error& e) {
            report.errors.push_back({spec.definition.name, e.what()});
        }
    }
    return report;
}

enum class ReportFormat { json, csv, markdown };

inline constexpr int report_schema_version = 1;

/// Four significant digits in the "1.684e-2" style.
inline std::string format_sci4(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    std::string s(buf);
    const auto e = s.find('e');
    if (e == std::string::npos) return s;
    std::string mantissa = s.substr(0, e);
    std::string exponent = s.substr(e + 1);
    bool negative = false;
    if (!exponent.empty() && (exponent[0] == '+' || exponent[0] == '-')) {
        negative = exponent[0] == '-';
        exponent.erase(0, 1);
    }
    exponent.erase(0, std::min(exponent.find_first_not_of('0'), exponent.size() - 1));
    return mantissa + "e" + (negative ? "-" : "") + exponent;
}

inline std::string format_year_cell(double year) {
    char buf[64];
    if (year == std::floor(year)) {
        std::snprintf(buf, sizeof buf, "%.0f", year);
    } else {
        std::snprintf(buf, sizeof buf, "%.4g", year);
    }
    return buf;
}

namespace detail {

using ordered_json = nlohmann::ordered_json;

inline ordered_json row_to_json(const AnalysisReportRow& r) {
    ordered_json j;
    j["region"] = r.region;
    j["regime"] = r.regime;
    j["a"] = r.a;
    j["k"] = r.k;
    j["range"] = {{"start", r.range_start}, {"end", r.range_end}};
    j["singularity"] = r.singularity;
    j["proximity"] = r.proximity ? ordered_json(*r.proximity) : ordered_json(nullptr);
    if (!r.takeoff) {
        j["takeoff"] = nullptr;
    } else if (r.takeoff->positive) {
        j["takeoff"] = r.takeoff->year ? ordered_json(*r.takeoff->year) : ordered_json("positive");
    } else {
        j["takeoff"] = "X";
    }
    if (r.diversion) {
        j["diversion"] = {{"year", r.diversion->year}, {"direction", std::string(to_string(r.diversion->direction))}};
    } else {
        j["diversion"] = nullptr;
    }
    j["weighting"] = std::string(to_string(r.weighting));
    return j;
}

inline AnalysisReportRow row_from_json(const ordered_json& j) {
    AnalysisReportRow r{};
    r.region = j.at("region").get<std::string>();
    r.regime = j.at("regime").get<int>();
    r.a = j.at("a").get<double>();
    r.k = j.at("k").get<double>();
    r.range_start = j.at("range").at("start").get<double>();
    r.range_end = j.at("range").at("end").get<double>();
    r.singularity = j.at("singularity").get<long>();
    if (!j.at("proximity").is_null()) r.proximity = j.at("proximity").get<long>();
    const auto& t = j.at("takeoff");
    if (t.is_string() && t.get<std::string>() == "X") {
        r.takeoff = TakeoffCell{false, std::nullopt};
    } else if (t.is_string()) {
        r.takeoff = TakeoffCell{true, std::nullopt};
    } else if (t.is_number()) {
        r.takeoff = TakeoffCell{true, t.get<double>()};
    }
    const auto& d = j.at("diversion");
    if (!d.is_null()) {
        r.diversion = DiversionCell{d.at("year").get<double>(),
                                    d.at("direction").get<std::string>() == "slower" ? Direction::slower
                                                                                    : Direction::faster};
    }
    r.weighting = j.at("weighting").get<std::string>() == "direct" ? Weighting::direct : Weighting::uniform;
    return r;
}

inline std::string takeoff_text(const std::optional<TakeoffCell>& t) {
    if (!t) return "";
    if (!t->positive) return "X";
    return t->year ? format_year_cell(std::round(*t->year)) : "positive";
}

}  // namespace detail

/// Deterministic rendering. JSON keeps full precision; CSV and markdown use
/// four significant digits for a and k.
inline std::string render_report(const AnalysisReport& report, ReportFormat format) {
    switch (format) {
        case ReportFormat::json: {
            detail::ordered_json doc;
            doc["schema_version"] = report_schema_version;
            doc["rows"] = detail::ordered_json::array();
            for (const auto& r : report.rows) doc["rows"].push_back(detail::row_to_json(r));
            doc["errors"] = detail::ordered_json::array();
            for (const auto& e : report.errors) doc["errors"].push_back({{"region", e.region}, {"message", e.message}});
            return doc.dump(2) + "\n";
        }
        case ReportFormat::csv: {
            std::string out = "region,regime,a,k,range_start,range_end,singularity,proximity,takeoff,diversion_year,"
                              "diversion_direction\n";
            for (const auto& r : report.rows) {
                out += detail::quote_field(r.region, ',') + "," + std::to_string(r.regime) + "," +
                       format_sci4(r.a) + "," + format_sci4(r.k) + "," + format_year_cell(r.range_start) + "," +
                       format_year_cell(r.range_end) + "," + std::to_string(r.singularity) + "," +
                       (r.proximity ? std::to_string(*r.proximity) : "") + "," + detail::takeoff_text(r.takeoff) +
                       "," + (r.diversion ? format_year_cell(r.diversion->year) : "") + "," +
                       (r.diversion ? std::string(to_string(r.diversion->direction)) : "") + "\n";
            }
            return out;
        }
        case ReportFormat::markdown:
        default: {
            std::string out = "| Region | a | k | Hyperbolic Range | Singularity | Proximity | Takeoff |\n"
                              "|---|---|---|---|---|---|---|\n";
            std::string previous;
            for (const auto& r : report.rows) {
                const std::string name = r.region == previous ? "" : r.region;
                previous = r.region;
                out += "| " + name + " | " + format_sci4(r.a) + " | " + format_sci4(r.k) + " | " +
                       format_year_cell(r.range_start) + " – " + format_year_cell(r.range_end) + " | " +
                       std::to_string(r.singularity) + " | " + (r.proximity ? std::to_string(*r.proximity) : "") +
                       " | " + detail::takeoff_text(r.takeoff) + " |\n";
            }
            if (!report.errors.empty()) {
                out += "\nErrors:\n\n";
                for (const auto& e : report.errors) out += "- " + e.region + ": " + e.message + "\n";
            }
            return out;
        }
    }
}

/// Inverse of render_report(..., ReportFormat::json).
inline AnalysisReport parse_report_json(std::string_view text) {
    const auto doc = detail::ordered_json::parse(text);
    if (doc.at("schema_version").get<int>() != report_schema_version) {
        throw InvalidArgument("unsupported report schema version");
    }
    AnalysisReport report;
    for (const auto& r : doc.at("rows")) report.rows.push_back(detail::row_from_json(r));
    for (const auto& e : doc.at("errors")) {
        report.errors.push_back({e.at("region").get<std::string>(), e.at("message").get<std::string>()});
    }
    return report;
}

}  // namespace hypergrowth
