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

// Command-line front end.
//
// Exit codes: 0 success, 1 at least one region (or acceptance check)
// failed, 2 usage, input or configuration error.

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <hypergrowth/acceptance.hpp>
#include <hypergrowth/hypergrowth.hpp>

namespace hg = hypergrowth;
using ordered_json = nlohmann::ordered_json;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_region_error = 1;
constexpr int exit_usage = 2;

/// Raised for anything that should end the run with exit code 2.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CommonOptions {
    std::string input;
    std::string format = "long";
    double unit_scale = 1.0;
    std::vector<std::string> regions;
    std::string regions_config;
    std::string window;
    std::string weighting = "uniform";
    std::vector<double> predicted_years;
    bool two_regime = false;
    std::string out;
    std::string emit;
};

std::string read_file(const std::string& path) {
    if (path == "-") {
        std::stringstream buf;
        buf << std::cin.rdbuf();
        return buf.str();
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot open '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_output(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw UsageError("cannot write '" + path + "'");
    out << text;
}

void add_input_options(CLI::App* cmd, CommonOptions& o, bool with_two_regime, bool with_predicted) {
    cmd->add_option("--input", o.input, "Input table (long or wide CSV); '-' reads stdin")->required();
    cmd->add_option("--format", o.format, "Input layout")->check(CLI::IsMember({"long", "wide"}));
    cmd->add_option("--unit-scale", o.unit_scale, "Multiplier applied to every input value")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--region", o.regions, "Region or entity name (repeatable); default: every entity");
    cmd->add_option("--regions-config", o.regions_config, "Region configuration file");
    cmd->add_option("--window", o.window, "Fit window START:END");
    cmd->add_option("--weighting", o.weighting, "Least-squares weighting")
        ->check(CLI::IsMember({"uniform", "direct"}));
    if (with_predicted) {
        cmd->add_option("--predicted-year", o.predicted_years, "Predicted takeoff year (repeatable)");
    }
    if (with_two_regime) cmd->add_flag("--two-regime", o.two_regime, "Fit two hyperbolic regimes");
    cmd->add_option("--out", o.out, "Output file; default stdout");
}

hg::DatasetTable load_table(const CommonOptions& o) {
    const auto text = read_file(o.input);
    try {
        return o.format == "wide" ? hg::parse_wide_table(text, o.unit_scale) : hg::parse_long_csv(text, o.unit_scale);
    } catch (const hg::ParseError& e) {
        throw UsageError(o.input + ": " + e.what());
    }
}

hg::Weighting weighting_of(const CommonOptions& o) {
    return o.weighting == "direct" ? hg::Weighting::direct : hg::Weighting::uniform;
}

std::optional<hg::FitWindow> window_of(const CommonOptions& o) {
    if (o.window.empty()) return std::nullopt;
    try {
        return hg::parse_window(o.window);
    } catch (const hg::Error& e) {
        throw UsageError("--window: " + std::string(e.what()));
    }
}

/// Regions from the config file (filtered by --region), else one region
/// per named or present entity. Command-line choices override the config.
std::vector<hg::RegionSpec> resolve_regions(const CommonOptions& o, const hg::DatasetTable& table) {
    std::vector<hg::RegionSpec> specs;
    if (!o.regions_config.empty()) {
        std::vector<hg::RegionSpec> configured;
        try {
            configured = hg::parse_region_config(read_file(o.regions_config));
        } catch (const hg::ParseError& e) {
            throw UsageError(o.regions_config + ": " + e.what());
        } catch (const hg::Error& e) {
            throw UsageError(o.regions_config + ": " + e.what());
        }
        if (o.regions.empty()) {
            specs = std::move(configured);
        } else {
            for (const auto& name : o.regions) {
                auto it = std::find_if(configured.begin(), configured.end(),
                                       [&](const hg::RegionSpec& s) { return s.definition.name == name; });
                if (it == configured.end()) throw UsageError("region '" + name + "' is not in the configuration");
                specs.push_back(*it);
            }
        }
    } else {
        const auto names = o.regions.empty() ? table.entities() : o.regions;
        for (const auto& name : names) {
            hg::RegionSpec s;
            s.definition.name = name;
            s.definition.members = {name};
            specs.push_back(std::move(s));
        }
    }
    const auto window = window_of(o);
    for (auto& s : specs) {
        if (o.two_regime) s.two_regime = true;
        if (window && s.two_regime) s.span = window;
        else if (window) s.window = window;
        if (!o.predicted_years.empty()) s.predicted_years = o.predicted_years;
    }
    return specs;
}

// Flat records rendered as JSON, CSV or markdown.

std::string cell_text(const ordered_json& v) {
    if (v.is_null()) return "";
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_number_integer()) return std::to_string(v.get<long long>());
    const double d = v.get<double>();
    if (d == std::floor(d) && std::abs(d) < 1e6) return hg::format_year_cell(d);
    return hg::format_sci4(d);
}

std::string render_records(const std::string& command, const std::vector<ordered_json>& records,
                           const std::vector<hg::RegionError>& errors, const std::string& emit) {
    if (emit == "json") {
        ordered_json doc;
        doc["schema_version"] = hg::report_schema_version;
        doc["command"] = command;
        doc["results"] = ordered_json::array();
        for (const auto& r : records) doc["results"].push_back(r);
        doc["errors"] = ordered_json::array();
        for (const auto& e : errors) doc["errors"].push_back({{"region", e.region}, {"message", e.message}});
        return doc.dump(2) + "\n";
    }
    std::vector<std::string> columns;
    for (const auto& r : records) {
        for (const auto& [key, value] : r.items()) {
            if (std::find(columns.begin(), columns.end(), key) == columns.end()) columns.push_back(key);
        }
    }
    std::string out;
    const bool markdown = emit == "markdown";
    const auto line = [&](const std::vector<std::string>& cells) {
        if (markdown) {
            out += "|";
            for (const auto& c : cells) out += " " + c + " |";
        } else {
            for (std::size_t i = 0; i < cells.size(); ++i) {
                out += (i ? "," : "") + hg::detail::quote_field(cells[i], ',');
            }
        }
        out += "\n";
    };
    if (!columns.empty()) {
        line(columns);
        if (markdown) line(std::vector<std::string>(columns.size(), "---"));
        for (const auto& r : records) {
            std::vector<std::string> cells;
            for (const auto& c : columns) cells.push_back(r.contains(c) ? cell_text(r[c]) : "");
            line(cells);
        }
    }
    if (!errors.empty()) {
        if (markdown) {
            out += "\nErrors:\n\n";
            for (const auto& e : errors) out += "- " + e.region + ": " + e.message + "\n";
        } else {
            for (const auto& e : errors) std::cerr << "error: " << e.region << ": " << e.message << "\n";
        }
    }
    return out;
}

ordered_json opt_json(const std::optional<double>& v) { return v ? ordered_json(*v) : ordered_json(nullptr); }

ordered_json fit_record(const std::string& region, const hg::HyperbolicFit& f) {
    ordered_json r;
    r["region"] = region;
    r["window_start"] = f.window.start_year;
    r["window_end"] = f.window.end_year;
    r["points"] = f.point_count();
    r["a"] = f.model.a();
    r["k"] = f.model.k();
    r["singularity"] = hg::round_year(f.model.singularity());
    r["rmse_reciprocal"] = f.rmse_reciprocal;
    r["r2_reciprocal"] = f.r2_reciprocal;
    r["max_abs_relative_deviation_pct"] = f.max_abs_relative_deviation;
    r["weighting"] = std::string(hg::to_string(f.weighting));
    return r;
}

hg::HyperbolicFit single_fit(const hg::YearValueSeries& series, const hg::RegionSpec& spec,
                             const hg::AnalysisConfig& config) {
    auto s = spec;
    s.two_regime = false;
    s.predicted_years.clear();
    hg::AnalysisConfig c = config;
    c.default_predicted_years.clear();
    return hg::analyse_region(series, s, c).fits.front();
}

/// Runs `body` per region, collecting library errors per region.
template <typename Body>
std::vector<hg::RegionError> for_each_region(const hg::DatasetTable& table, const std::vector<hg::RegionSpec>& specs,
                                             Body body) {
    std::vector<hg::RegionError> errors;
    for (const auto& spec : specs) {
        try {
            body(spec, hg::build_region_series(table, spec.definition));
        } catch (const hg::Error& e) {
            errors.push_back({spec.definition.name, e.what()});
        }
    }
    return errors;
}

int finish(const CommonOptions& o, const std::string& command, const std::vector<ordered_json>& records,
           const std::vector<hg::RegionError>& errors) {
    write_output(o.out, render_records(command, records, errors, o.emit));
    return errors.empty() ? exit_ok : exit_region_error;
}

int run_fit(const CommonOptions& o) {
    const auto table = load_table(o);
    const auto specs = resolve_regions(o, table);
    hg::AnalysisConfig config;
    config.weighting = weighting_of(o);
    std::vector<ordered_json> records;
    const auto errors = for_each_region(table, specs, [&](const hg::RegionSpec& spec, const hg::YearValueSeries& s) {
        records.push_back(fit_record(spec.definition.name, single_fit(s, spec, config)));
    });
    return finish(o, "fit", records, errors);
}

int run_segment(const CommonOptions& o) {
    const auto table = load_table(o);
    auto specs = resolve_regions(o, table);
    const auto weighting = weighting_of(o);
    std::vector<ordered_json> records;
    const auto errors = for_each_region(table, specs, [&](const hg::RegionSpec& spec, const hg::YearValueSeries& s) {
        const auto span = spec.window ? spec.window : spec.span;
        const auto scoped = span ? s.between(span->start_year, span->end_year) : s;
        const auto seg = hg::segment_two_hyperbolic(scoped, 3, weighting);
        int index = 0;
        for (const auto& segment : seg.segments) {
            ordered_json r;
            r["region"] = spec.definition.name;
            r["segment"] = ++index;
            r["kind"] = std::string(hg::to_string(segment.kind));
            r["start"] = segment.window.start_year;
            r["end"] = segment.window.end_year;
            r["a"] = segment.fit ? ordered_json(segment.fit->model.a()) : ordered_json(nullptr);
            r["k"] = segment.fit ? ordered_json(segment.fit->model.k()) : ordered_json(nullptr);
            r["singularity"] = segment.fit ? ordered_json(hg::round_year(segment.fit->model.singularity()))
                                           : ordered_json(nullptr);
            r["k_ratio"] = opt_json(seg.k_ratio);
            records.push_back(std::move(r));
        }
    });
    return finish(o, "segment", records, errors);
}

int run_diversion(const CommonOptions& o) {
    const auto table = load_table(o);
    const auto specs = resolve_regions(o, table);
    hg::AnalysisConfig config;
    config.weighting = weighting_of(o);
    std::vector<ordered_json> records;
    const auto errors = for_each_region(table, specs, [&](const hg::RegionSpec& spec, const hg::YearValueSeries& s) {
        const auto fit = single_fit(s, spec, config);
        const auto finding = hg::detect_diversion(s, fit, config.diversion);
        auto r = fit_record(spec.definition.name, fit);
        r["diversion_year"] = finding ? opt_json(finding->year) : ordered_json(nullptr);
        r["direction"] = finding ? ordered_json(std::string(hg::to_string(finding->direction))) : ordered_json(nullptr);
        r["proximity"] = finding && finding->proximity_years ? ordered_json(*finding->proximity_years)
                                                             : ordered_json(nullptr);
        r["evidence_points"] = finding ? ordered_json(finding->evidence.size()) : ordered_json(nullptr);
        r["threshold"] = finding ? ordered_json(finding->threshold) : ordered_json(nullptr);
        records.push_back(std::move(r));
    });
    return finish(o, "diversion", records, errors);
}

int run_takeoff(const CommonOptions& o) {
    const auto table = load_table(o);
    const auto specs = resolve_regions(o, table);
    std::vector<ordered_json> records;
    const auto errors = for_each_region(table, specs, [&](const hg::RegionSpec& spec, const hg::YearValueSeries& s) {
        const auto years = spec.predicted_years.empty() ? std::vector<double>{hg::developed_takeoff_year}
                                                        : spec.predicted_years;
        for (double year : years) {
            const auto h = hg::widened_to_data(s, {year, 50.0});
            const auto t = hg::takeoff_test(s, h);
            ordered_json r;
            r["region"] = spec.definition.name;
            r["predicted_year"] = year;
            r["halfwidth"] = t.halfwidth;
            r["positive"] = t.positive;
            r["break_year"] = t.timing.value;
            r["pre_rate"] = t.stagnation_before.value;
            r["post_rate"] = t.post_rate;
            r["rate_ratio"] = t.prominence.value;
            r["ic_gap"] = t.model_comparison;
            r["stagnation_before"] = t.stagnation_before.passed;
            r["prominent"] = t.prominence.passed;
            r["timing"] = t.timing.passed;
            records.push_back(std::move(r));
        }
    });
    return finish(o, "takeoff", records, errors);
}

int run_report(const CommonOptions& o) {
    const auto table = load_table(o);
    const auto specs = resolve_regions(o, table);
    hg::AnalysisConfig config;
    config.weighting = weighting_of(o);
    const auto report = hg::run_analysis(table, specs, config);
    const auto format = o.emit == "csv"        ? hg::ReportFormat::csv
                        : o.emit == "markdown" ? hg::ReportFormat::markdown
                                               : hg::ReportFormat::json;
    write_output(o.out, hg::render_report(report, format));
    if (format == hg::ReportFormat::csv) {
        for (const auto& e : report.errors) std::cerr << "error: " << e.region << ": " << e.message << "\n";
    }
    return report.ok() ? exit_ok : exit_region_error;
}

int run_plot(const CommonOptions& o, const std::string& mode) {
    const auto table = load_table(o);
    const auto specs = resolve_regions(o, table);
    if (specs.size() != 1) throw UsageError("plot needs exactly one region (use --region)");
    hg::AnalysisConfig config;
    config.weighting = weighting_of(o);
    const auto& spec = specs.front();
    std::string text;
    const auto errors = for_each_region(table, specs, [&](const hg::RegionSpec&, const hg::YearValueSeries& s) {
        const auto analysis = hg::analyse_region(s, spec, config);
        std::vector<hg::Annotation> notes;
        for (const auto& f : analysis.fits) {
            notes.push_back({"singularity " + std::to_string(hg::round_year(f.model.singularity())),
                             f.model.singularity()});
        }
        if (analysis.segmentation) {
            for (double b : analysis.segmentation->breakpoints) {
                notes.push_back({"break " + hg::format_year_cell(b), b});
            }
        }
        if (analysis.diversion) {
            notes.push_back({"diversion " + hg::format_year_cell(analysis.diversion->year), analysis.diversion->year});
        }
        auto sheet = hg::emit_plot(s, analysis.fits,
                                   mode == "semilog-direct" ? hg::PlotMode::semilog_direct
                                                            : hg::PlotMode::reciprocal_linear,
                                   std::move(notes));
        sheet.title = spec.definition.name;
        text = o.emit == "svg" ? hg::plot_svg(sheet) : hg::plot_csv(sheet);
    });
    for (const auto& e : errors) std::cerr << "error: " << e.region << ": " << e.message << "\n";
    if (!errors.empty()) return exit_region_error;
    write_output(o.out, text);
    return exit_ok;
}

struct SynthOptions {
    std::string shape = "hyperbolic";
    double a = 1.684e-2;
    double k = 8.539e-6;
    double level = 100.0;
    double rate = 0.02;
    double pre_rate = 0.0;
    double reference_year = 0.0;
    double break_year = 1750.0;
    double k_ratio = 4.2;
    double slow_factor = 0.25;
    std::string years;  // START:END, default: the historical grid
    double step = 1.0;
    double sigma = 0.0;
    std::uint64_t seed = 0;
    std::string label = "synthetic";
    std::string out;
};

int run_synth(const SynthOptions& o) {
    hg::synth::Shape shape = hg::synth::Hyperbolic{o.a, o.k};
    if (o.shape == "constant") shape = hg::synth::Constant{o.level};
    else if (o.shape == "exponential") shape = hg::synth::Exponential{o.level, o.rate, o.reference_year};
    else if (o.shape == "stagnation-takeoff")
        shape = hg::synth::StagnationThenTakeoff{o.level, o.break_year, o.rate, o.pre_rate};
    else if (o.shape == "spliced") shape = hg::synth::SplicedTwoHyperbolic{o.a, o.k, o.break_year, o.k_ratio};
    else if (o.shape == "hyperbolic-then-slower")
        shape = hg::synth::HyperbolicThenSlower{o.a, o.k, o.break_year, o.slow_factor};

    std::vector<double> years = hg::synth::maddison_year_grid();
    if (!o.years.empty()) {
        CommonOptions range;
        range.window = o.years;
        const auto w = window_of(range);
        years = hg::synth::year_range(w->start_year, w->end_year, o.step);
    }
    hg::YearValueSeries series = [&] {
        try {
            return hg::synth::generate({shape, years, o.sigma, o.seed, o.label});
        } catch (const hg::Error& e) {
            throw UsageError(e.what());
        }
    }();
    hg::DatasetTable table;
    for (const auto& p : series) table.add(o.label, p.year, p.value);
    write_output(o.out, hg::write_long_csv(table));
    return exit_ok;
}

int run_verify(const std::string& maddison_csv, const std::string& entity) {
    hg::acceptance::Options opts;
    opts.maddison_csv = maddison_csv;
    if (opts.maddison_csv.empty()) {
        if (const char* env = std::getenv("HYPERGROWTH_MADDISON_CSV")) opts.maddison_csv = env;
    }
    opts.world_entity = entity;
    bool ok = true;
    for (const auto& check : hg::acceptance::all_checks(opts)) {
        const auto r = check();
        std::cout << hg::acceptance::format_line(r) << std::endl;
        if (r.status == hg::acceptance::Status::fail) ok = false;
    }
    return ok ? exit_ok : exit_region_error;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hyperbolic growth analysis of historical GDP series"};
    app.require_subcommand(1);

    CommonOptions fit_o, seg_o, div_o, take_o, rep_o, plot_o;
    fit_o.emit = seg_o.emit = div_o.emit = take_o.emit = "csv";
    rep_o.emit = "markdown";
    plot_o.emit = "csv";

    auto* fit = app.add_subcommand("fit", "Fit a hyperbola per region (configured window or best scanned window)");
    add_input_options(fit, fit_o, false, false);
    fit->add_option("--emit", fit_o.emit)->check(CLI::IsMember({"json", "csv", "markdown"}));

    auto* seg = app.add_subcommand("segment", "Split each region into two hyperbolic regimes");
    add_input_options(seg, seg_o, false, false);
    seg->add_option("--emit", seg_o.emit)->check(CLI::IsMember({"json", "csv", "markdown"}));

    auto* div = app.add_subcommand("diversion", "Fit and detect the departure from the hyperbola");
    add_input_options(div, div_o, false, false);
    div->add_option("--emit", div_o.emit)->check(CLI::IsMember({"json", "csv", "markdown"}));

    auto* take = app.add_subcommand("takeoff", "Test for a takeoff from stagnation");
    add_input_options(take, take_o, false, true);
    take->add_option("--emit", take_o.emit)->check(CLI::IsMember({"json", "csv", "markdown"}));

    auto* rep = app.add_subcommand("report", "Full analysis as a summary table");
    add_input_options(rep, rep_o, true, true);
    rep->add_option("--emit", rep_o.emit)->check(CLI::IsMember({"json", "csv", "markdown"}));

    std::string plot_mode = "reciprocal-linear";
    auto* plot = app.add_subcommand("plot", "Figure data for one region");
    add_input_options(plot, plot_o, true, false);
    plot->add_option("--emit", plot_o.emit)->check(CLI::IsMember({"csv", "svg"}));
    plot->add_option("--mode", plot_mode, "Display convention")
        ->check(CLI::IsMember({"reciprocal-linear", "semilog-direct"}));

    SynthOptions synth_o;
    auto* synth = app.add_subcommand("synth", "Generate a synthetic series as long CSV");
    synth->add_option("--shape", synth_o.shape)
        ->check(CLI::IsMember(
            {"hyperbolic", "constant", "exponential", "stagnation-takeoff", "spliced", "hyperbolic-then-slower"}));
    synth->add_option("--a", synth_o.a);
    synth->add_option("--k", synth_o.k);
    synth->add_option("--level", synth_o.level);
    synth->add_option("--rate", synth_o.rate);
    synth->add_option("--pre-rate", synth_o.pre_rate);
    synth->add_option("--reference-year", synth_o.reference_year);
    synth->add_option("--break-year", synth_o.break_year);
    synth->add_option("--k-ratio", synth_o.k_ratio);
    synth->add_option("--slow-factor", synth_o.slow_factor);
    synth->add_option("--years", synth_o.years, "Annual grid START:END; default: historical sample years");
    synth->add_option("--step", synth_o.step)->check(CLI::PositiveNumber);
    synth->add_option("--sigma", synth_o.sigma, "Multiplicative log-normal noise")->check(CLI::NonNegativeNumber);
    synth->add_option("--seed", synth_o.seed);
    synth->add_option("--label", synth_o.label, "Entity name");
    synth->add_option("--out", synth_o.out);
    std::string synth_emit = "csv";
    synth->add_option("--emit", synth_emit)->check(CLI::IsMember({"csv"}));

    std::string maddison_csv, world_entity = "World";
    auto* verify = app.add_subcommand("verify", "Run the acceptance checks");
    verify->add_option("--maddison-csv", maddison_csv, "Long CSV of the historical data (enables check 5)");
    verify->add_option("--world-entity", world_entity);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? exit_ok : exit_usage;
    }

    try {
        if (*fit) return run_fit(fit_o);
        if (*seg) return run_segment(seg_o);
        if (*div) return run_diversion(div_o);
        if (*take) return run_takeoff(take_o);
        if (*rep) return run_report(rep_o);
        if (*plot) return run_plot(plot_o, plot_mode);
        if (*synth) return run_synth(synth_o);
        if (*verify) return run_verify(maddison_csv, world_entity);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const hg::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    }
    return exit_usage;
}
