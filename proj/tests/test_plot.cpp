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

#include <algorithm>

#include <gtest/gtest.h>

#include <hypergrowth/plot.hpp>
#include <hypergrowth/synth.hpp>

using namespace hypergrowth;
namespace s = hypergrowth::synth;

namespace {

std::size_t count(const std::string& text, const std::string& needle) {
    std::size_t n = 0;
    for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
    return n;
}

}  // namespace

TEST(Plot, ReciprocalModeOfExactDataMatchesTheLine) {
    const auto series = s::generate({s::Hyperbolic{0.3, 1.5e-4}, s::year_range(1, 1900, 20)});
    const auto fit = fit_hyperbolic(series);
    const auto sheet = emit_plot(series, {fit}, PlotMode::reciprocal_linear);
    ASSERT_EQ(sheet.rows.size(), series.size());
    for (const auto& r : sheet.rows) {
        ASSERT_TRUE(r.fitted);
        EXPECT_NEAR(r.observed, *r.fitted, 1e-12 * r.observed);
        EXPECT_NEAR(*r.residual_reciprocal, 0.0, 1e-12 * r.observed);
    }
}

TEST(Plot, SemilogCurveIncreasesAndStopsBeforeSingularity) {
    const auto series = s::generate({s::HyperbolicThenSlower{1.684e-2, 1.684e-2 / 1965.0, 1955.0, 0.25},
                                     s::year_range(1850, 1990, 5)});
    const auto fit = fit_hyperbolic(series, FitWindow(1850, 1955));
    const auto sheet = emit_plot(series, {fit}, PlotMode::semilog_direct);
    ASSERT_EQ(sheet.curves.size(), 1u);
    const auto& curve = sheet.curves[0];
    ASSERT_EQ(curve.size(), 200u);
    for (std::size_t i = 1; i < curve.size(); ++i) EXPECT_GT(curve[i].value, curve[i - 1].value);
    EXPECT_LE(curve.back().year, fit.model.singularity() - 1.0);
    // Past the singularity the observed points have no fitted value.
    EXPECT_FALSE(sheet.rows.back().fitted);
}

TEST(Plot, SeveralFitsSpanTheirOwnWindows) {
    const auto series = s::generate({s::SplicedTwoHyperbolic{1.244e-1, 5.030e-5, 1820.0, 4.2},
                                     s::year_range(1000, 1950, 10)});
    const auto first = fit_hyperbolic(series, FitWindow(1000, 1820));
    const auto second = fit_hyperbolic(series, FitWindow(1820, 1950));
    const auto sheet = emit_plot(series, {first, second}, PlotMode::reciprocal_linear, {{"break", 1820}});
    ASSERT_EQ(sheet.curves.size(), 2u);
    EXPECT_EQ(sheet.curves[0].front().year, 1000);
    EXPECT_EQ(sheet.curves[0].back().year, 1820);
    EXPECT_EQ(sheet.curves[1].front().year, 1820);
    for (const auto& r : sheet.rows) EXPECT_NEAR(*r.residual_reciprocal, 0.0, 1e-12);
}

TEST(Plot, CsvSheet) {
    const auto series = s::generate({s::Hyperbolic{0.3, 1.5e-4}, s::year_range(1, 1900, 100)});
    const auto csv = plot_csv(emit_plot(series, {fit_hyperbolic(series)}, PlotMode::semilog_direct));
    EXPECT_EQ(csv.rfind("year,observed,fitted,residual_reciprocal\n", 0), 0u);
    EXPECT_EQ(count(csv, "\n"), series.size() + 1);
    const auto no_fit = plot_csv(emit_plot(series, {}, PlotMode::semilog_direct));
    EXPECT_NE(no_fit.find("1,3.3"), std::string::npos);
    EXPECT_NE(no_fit.find(",,\n"), std::string::npos);
}

TEST(Plot, SvgIsSelfContained) {
    const auto series = s::generate({s::Hyperbolic{0.3, 1.5e-4}, s::year_range(1, 1900, 100)});
    const auto fit = fit_hyperbolic(series);
    for (auto mode : {PlotMode::reciprocal_linear, PlotMode::semilog_direct}) {
        auto sheet = emit_plot(series, {fit}, mode, {{"singularity", 2000}, {"a < b & c", 1500}});
        sheet.title = "Test <region>";
        const auto svg = plot_svg(sheet);
        EXPECT_EQ(svg.rfind("<svg xmlns=\"http://www.w3.org/2000/svg\"", 0), 0u);
        EXPECT_EQ(svg.find("<script"), std::string::npos);
        EXPECT_EQ(svg.find("href"), std::string::npos);
        EXPECT_EQ(count(svg, "<circle"), series.size());
        EXPECT_EQ(count(svg, "<polyline"), 1u);
        EXPECT_NE(svg.find("Test &lt;region&gt;"), std::string::npos);
        EXPECT_NE(svg.find("a &lt; b &amp; c"), std::string::npos);
        EXPECT_NE(svg.find("</svg>"), std::string::npos);
        const bool log_axis = svg.find("GDP [billions") != std::string::npos;
        EXPECT_EQ(log_axis, mode == PlotMode::semilog_direct);
    }
}
