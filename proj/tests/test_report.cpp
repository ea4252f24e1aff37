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

#include <gtest/gtest.h>

#include <hypergrowth/acceptance.hpp>
#include <hypergrowth/report.hpp>
#include <hypergrowth/synth.hpp>

using namespace hypergrowth;
namespace s = hypergrowth::synth;

namespace {

void add_series(DatasetTable& table, const YearValueSeries& series) {
    for (const auto& p : series) table.add(series.label(), p.year, p.value);
}

DatasetTable demo_table() {
    DatasetTable t;
    const double a = 1.684e-2;
    add_series(t, s::generate({s::Hyperbolic{a, a / 2100.0}, s::maddison_year_grid(), 0.0, 0, "Plain"}));
    add_series(t, s::generate({acceptance::spliced_scenario(), s::year_range(1000, 1950, 10), 0.0, 0, "Spliced"}));
    add_series(t, s::generate({s::HyperbolicThenSlower{a, a / 1965.0, 1955.0, 0.25}, s::year_range(1850, 1970), 0.0,
                               0, "Diverted"}));
    t.add("Tiny", 1900, 1.0);
    t.add("Tiny", 1950, 2.0);
    return t;
}

RegionSpec region(const std::string& name) {
    RegionSpec r;
    r.definition = {name, {name}};
    return r;
}

}  // namespace

TEST(Sci4, TableStyle) {
    EXPECT_EQ(format_sci4(1.684e-2), "1.684e-2");
    EXPECT_EQ(format_sci4(8.539e-6), "8.539e-6");
    EXPECT_EQ(format_sci4(1.570), "1.570e0");
    EXPECT_EQ(format_sci4(12346.0), "1.235e4");
    EXPECT_EQ(format_sci4(-3.2e-11), "-3.200e-11");
}

TEST(Config, ParsesRegions) {
    const auto regions = parse_region_config(
        "# comment\n"
        "region = Western Europe (4)\n"
        "members = France, Germany ,Italy,United Kingdom\n"
        "window = 1:1875\n"
        "\n"
        "region = Africa\n"
        "members = Africa\n"
        "two_regime = true\n"
        "span = 1:1950  # trailing comment\n"
        "predicted_years = 1900, 1750\n"
        "require_complete = false\n"
        "unit_scale = 0.001\n");
    ASSERT_EQ(regions.size(), 2u);
    EXPECT_EQ(regions[0].definition.name, "Western Europe (4)");
    EXPECT_EQ(regions[0].definition.members.size(), 4u);
    EXPECT_EQ(regions[0].definition.members[1], "Germany");
    EXPECT_EQ(regions[0].window->end_year, 1875);
    EXPECT_TRUE(regions[1].two_regime);
    EXPECT_EQ(regions[1].predicted_years, (std::vector<double>{1900, 1750}));
    EXPECT_FALSE(regions[1].definition.require_complete);
    EXPECT_EQ(regions[1].definition.unit_scale, 0.001);
}

TEST(Config, ErrorsNameTheLine) {
    const auto line_of = [](const char* text) {
        try {
            parse_region_config(text);
        } catch (const ParseError& e) {
            return e.line();
        }
        return std::size_t{0};
    };
    EXPECT_EQ(line_of("members = A\n"), 1u);
    EXPECT_EQ(line_of("region = A\nmembers = A\ncolour = red\n"), 3u);
    EXPECT_EQ(line_of("region = A\nmembers = A\nwindow = 1955:1000\n"), 3u);
    EXPECT_EQ(line_of("region = A\nmembers = A\nregion = A\n"), 3u);
    EXPECT_EQ(line_of("region = A\nnonsense\n"), 2u);
    EXPECT_EQ(line_of("region = A\ntwo_regime = maybe\n"), 2u);
    EXPECT_THROW(parse_region_config("region = A\n"), ConfigError);
}

TEST(Window, Parse) {
    const auto w = parse_window("1000:1955");
    EXPECT_EQ(w.start_year, 1000);
    EXPECT_EQ(w.end_year, 1955);
    EXPECT_THROW(parse_window("1955:1000"), InvalidArgument);
    EXPECT_THROW(parse_window("1000-1955"), InvalidArgument);
    EXPECT_THROW(parse_window("a:b"), InvalidArgument);
}

TEST(RunAnalysis, SingleRegimeRowWithNegativeTakeoff) {
    auto spec = region("Plain");
    spec.predicted_years = {developed_takeoff_year};
    const auto report = run_analysis(demo_table(), {spec});
    ASSERT_TRUE(report.ok());
    ASSERT_EQ(report.rows.size(), 1u);
    const auto& row = report.rows[0];
    EXPECT_NEAR(row.a, 1.684e-2, 1e-12);
    EXPECT_EQ(row.singularity, 2100);
    EXPECT_EQ(row.range_start, 1);
    EXPECT_EQ(row.range_end, 2008);
    EXPECT_FALSE(row.proximity);
    ASSERT_TRUE(row.takeoff);
    EXPECT_FALSE(row.takeoff->positive);
}

TEST(RunAnalysis, TwoRegimesGiveTwoRows) {
    auto spec = region("Spliced");
    spec.two_regime = true;
    const auto report = run_analysis(demo_table(), {spec});
    ASSERT_EQ(report.rows.size(), 2u);
    EXPECT_EQ(report.rows[0].regime, 1);
    EXPECT_EQ(report.rows[1].regime, 2);
    EXPECT_NEAR(report.rows[1].k / report.rows[0].k, 4.2, 1e-9);
    EXPECT_EQ(report.rows[0].range_end, 1820);
    EXPECT_FALSE(report.rows[0].proximity);
}

TEST(RunAnalysis, DiversionGivesProximity) {
    auto spec = region("Diverted");
    spec.window = FitWindow(1850, 1955);
    const auto report = run_analysis(demo_table(), {spec});
    ASSERT_EQ(report.rows.size(), 1u);
    const auto& row = report.rows[0];
    ASSERT_TRUE(row.diversion);
    EXPECT_EQ(row.diversion->year, 1956);
    EXPECT_EQ(row.diversion->direction, Direction::slower);
    EXPECT_EQ(row.proximity, 9);
}

TEST(RunAnalysis, RowInvariants) {
    auto spliced = region("Spliced");
    spliced.two_regime = true;
    const auto report = run_analysis(demo_table(), {region("Plain"), spliced, region("Diverted")});
    for (const auto& row : report.rows) {
        EXPECT_EQ(row.singularity, round_year(row.a / row.k));
        EXPECT_EQ(row.proximity.has_value(), row.diversion.has_value());
    }
}

TEST(RunAnalysis, RegionErrorsDoNotStopOthers) {
    auto missing = region("Nowhere");
    const auto report = run_analysis(demo_table(), {region("Tiny"), missing, region("Plain")});
    EXPECT_FALSE(report.ok());
    ASSERT_EQ(report.errors.size(), 2u);
    EXPECT_EQ(report.errors[0].region, "Tiny");
    EXPECT_EQ(report.errors[1].region, "Nowhere");
    ASSERT_EQ(report.rows.size(), 1u);
    EXPECT_EQ(report.rows[0].region, "Plain");
}

TEST(RunAnalysis, Deterministic) {
    auto spliced = region("Spliced");
    spliced.two_regime = true;
    const std::vector<RegionSpec> regions{region("Plain"), spliced, region("Diverted")};
    const auto table = demo_table();
    EXPECT_EQ(render_report(run_analysis(table, regions), ReportFormat::json),
              render_report(run_analysis(table, regions), ReportFormat::json));
}

TEST(Render, JsonRoundTripIsByteIdentical) {
    auto spliced = region("Spliced");
    spliced.two_regime = true;
    auto plain = region("Plain");
    plain.predicted_years = {1750};
    const auto report = run_analysis(demo_table(), {plain, spliced, region("Diverted"), region("Tiny")});
    const auto json = render_report(report, ReportFormat::json);
    const auto parsed = parse_report_json(json);
    EXPECT_EQ(parsed, report);
    EXPECT_EQ(render_report(parsed, ReportFormat::json), json);
    EXPECT_NE(json.find("\"schema_version\": 1"), std::string::npos);
}

TEST(Render, EmptyReport) {
    const AnalysisReport empty;
    const auto json = render_report(empty, ReportFormat::json);
    EXPECT_EQ(parse_report_json(json), empty);
    EXPECT_EQ(render_report(empty, ReportFormat::markdown),
              "| Region | a | k | Hyperbolic Range | Singularity | Proximity | Takeoff |\n|---|---|---|---|---|---|---|\n");
    EXPECT_EQ(render_report(empty, ReportFormat::csv).find('\n'), render_report(empty, ReportFormat::csv).size() - 1);
}

TEST(Render, MarkdownMirrorsTheSummaryTable) {
    AnalysisReport report;
    report.rows.push_back({"World", 1, 1.684e-2, 8.539e-6, 1000, 1955, 1972, 17, TakeoffCell{false, {}},
                           DiversionCell{1955, Direction::slower}, Weighting::uniform});
    report.rows.push_back({"Africa", 1, 1.244e-1, 5.030e-5, 1, 1820, 2473, {}, {}, {}, Weighting::uniform});
    report.rows.push_back({"Africa", 2, 4.192e-1, 2.126e-4, 1820, 1950, 1972, 22, TakeoffCell{false, {}},
                           DiversionCell{1950, Direction::slower}, Weighting::uniform});
    const auto md = render_report(report, ReportFormat::markdown);
    EXPECT_NE(md.find("| World | 1.684e-2 | 8.539e-6 | 1000 – 1955 | 1972 | 17 | X |"), std::string::npos);
    EXPECT_NE(md.find("| Africa | 1.244e-1 | 5.030e-5 | 1 – 1820 | 2473 |  |  |"), std::string::npos);
    EXPECT_NE(md.find("|  | 4.192e-1 | 2.126e-4 | 1820 – 1950 | 1972 | 22 | X |"), std::string::npos);
    const auto csv = render_report(report, ReportFormat::csv);
    EXPECT_NE(csv.find("World,1,1.684e-2,8.539e-6,1000,1955,1972,17,X,1955,slower"), std::string::npos);
}
