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

#include <cmath>

#include <gtest/gtest.h>

#include <hypergrowth/acceptance.hpp>
#include <hypergrowth/fit.hpp>
#include <hypergrowth/regime.hpp>
#include <hypergrowth/synth.hpp>

using namespace hypergrowth;
namespace s = hypergrowth::synth;

TEST(Proximity, PublishedSingularityMinusDiversionYear) {
    EXPECT_EQ(proximity(HyperbolicModel(1.684e-2, 8.539e-6), 1955), 17);
    EXPECT_EQ(proximity(HyperbolicModel(2.303e-2, 1.129e-5), 1950), 90);
    EXPECT_EQ(proximity(HyperbolicModel(1.0, 1e-3), 1000), 0);
    EXPECT_THROW(proximity(HyperbolicModel(1.0, 1e-3), 1001), RegimeError);
}

TEST(Diversion, DetectsSlowerTrajectoryAtTheBreak) {
    const auto series = s::generate(acceptance::diversion_scenario(0.0, 0));
    const auto fit = fit_hyperbolic(series, FitWindow(1850, 1955));
    const auto finding = detect_diversion(series, fit);
    ASSERT_TRUE(finding);
    EXPECT_EQ(finding->year, 1956);
    EXPECT_EQ(finding->direction, Direction::slower);
    EXPECT_TRUE(finding->used_absolute_fallback);  // noiseless residuals have no spread
    EXPECT_EQ(finding->proximity_years, 1965 - 1956);
    EXPECT_EQ(finding->evidence.size(), 15u);
}

TEST(Diversion, DetectsFasterTrajectory) {
    // Hyperbola up to 1900, then values above the curve.
    std::vector<Observation> pts;
    const HyperbolicModel m(0.5, 2.0e-4);
    for (int y = 1800; y <= 1920; y += 5) pts.push_back({double(y), evaluate(m, y) * (y > 1900 ? 1.5 : 1.0)});
    const YearValueSeries series(pts);
    const auto finding = detect_diversion(series, fit_hyperbolic(series, FitWindow(1800, 1900)));
    ASSERT_TRUE(finding);
    EXPECT_EQ(finding->direction, Direction::faster);
    EXPECT_EQ(finding->year, 1905);
    EXPECT_EQ(finding->proximity_years, 2500 - 1905);
}

TEST(Diversion, NothingAfterTheWindow) {
    const auto series = s::generate({s::Hyperbolic{0.5, 2e-4}, s::year_range(1800, 1900)});
    EXPECT_FALSE(detect_diversion(series, fit_hyperbolic(series)));
}

TEST(Diversion, SingleOutlierIsNotARun) {
    std::vector<Observation> pts;
    const HyperbolicModel m(0.5, 2.0e-4);
    for (int y = 1800; y <= 1920; y += 5) pts.push_back({double(y), evaluate(m, y) * (y == 1910 ? 0.5 : 1.0)});
    const YearValueSeries series(pts);
    EXPECT_FALSE(detect_diversion(series, fit_hyperbolic(series, FitWindow(1800, 1900))));
    DiversionOptions one;
    one.consecutive = 1;
    const auto finding = detect_diversion(series, fit_hyperbolic(series, FitWindow(1800, 1900)), one);
    ASSERT_TRUE(finding);
    EXPECT_EQ(finding->year, 1910);
}

TEST(Diversion, DegenerateScaleWithoutFallback) {
    const auto series = s::generate(acceptance::diversion_scenario(0.0, 0));
    DiversionOptions opts;
    opts.allow_absolute_fallback = false;
    try {
        detect_diversion(series, fit_hyperbolic(series, FitWindow(1850, 1955)), opts);
        FAIL();
    } catch (const RegimeError& e) {
        EXPECT_EQ(e.kind(), RegimeErrorKind::degenerate_scale);
    }
}

TEST(Diversion, ReciprocalScaleAlsoDetects) {
    const auto series = s::generate(acceptance::diversion_scenario(0.002, 5));
    DiversionOptions opts;
    opts.scale = ResidualScale::reciprocal;
    const auto finding = detect_diversion(series, fit_hyperbolic(series, FitWindow(1850, 1955)), opts);
    ASSERT_TRUE(finding);
    EXPECT_EQ(finding->direction, Direction::slower);
}

TEST(Diversion, MonteCarloRates) {
    int hits = 0, quiet = 0;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        const auto d = s::generate(acceptance::diversion_scenario(0.01, 100 + seed));
        const auto f = detect_diversion(d, fit_hyperbolic(d, FitWindow(1850, 1955)));
        if (f && std::abs(f->year - 1955) <= 1 && f->direction == Direction::slower) ++hits;
        const auto p = s::generate(acceptance::on_model_scenario(0.01, 900 + seed));
        if (!detect_diversion(p, fit_hyperbolic(p, FitWindow(1850, 1955)))) ++quiet;
    }
    EXPECT_GE(hits, 190);
    EXPECT_GE(quiet, 196);
}

TEST(Segmentation, NoiselessSpliceOffTheGridLeavesAGap) {
    // The break at 1820 falls between the samples 1811 and 1821, and neither
    // neighbour lies on the other regime's curve.
    const auto shape = acceptance::spliced_scenario();
    const auto series = s::generate({shape, s::year_range(1, 1950, 10)});
    const auto seg = segment_two_hyperbolic(series);
    ASSERT_EQ(seg.segments.size(), 3u);
    EXPECT_EQ(seg.segments[1].kind, SegmentKind::unmodeled);
    EXPECT_EQ(seg.breakpoints, (std::vector<double>{1811, 1821}));
    const auto fits = seg.hyperbolic_fits();
    ASSERT_EQ(fits.size(), 2u);
    EXPECT_NEAR(fits[0]->model.k(), shape.k, 1e-9 * shape.k);
    EXPECT_NEAR(fits[1]->model.a(), shape.second_a(), 1e-9 * shape.second_a());
    EXPECT_NEAR(*seg.k_ratio, 4.2, 1e-9);
}

TEST(Segmentation, NoiselessSpliceOnTheGridSharesTheBreak) {
    const auto shape = acceptance::spliced_scenario();
    const auto series = s::generate({shape, s::year_range(1000, 1950, 10)});
    const auto seg = segment_two_hyperbolic(series);
    ASSERT_EQ(seg.segments.size(), 2u);
    EXPECT_EQ(seg.breakpoints, (std::vector<double>{1820}));
    EXPECT_EQ(seg.segments[0].window.end_year, 1820);
    EXPECT_EQ(seg.segments[1].window.start_year, 1820);
}

TEST(Segmentation, CoversTheSeriesWithoutOverlapBeyondTheJoin) {
    const auto series = s::generate({acceptance::spliced_scenario(), s::year_range(1, 1950, 10), 0.01, 2});
    const auto seg = segment_two_hyperbolic(series);
    EXPECT_EQ(seg.segments.front().window.start_year, series.front().year);
    EXPECT_EQ(seg.segments.back().window.end_year, series.back().year);
    for (std::size_t i = 1; i < seg.segments.size(); ++i) {
        EXPECT_EQ(seg.segments[i - 1].window.end_year, seg.segments[i].window.start_year);
    }
    for (const auto& sgm : seg.segments) {
        EXPECT_EQ(sgm.fit.has_value(), sgm.kind == SegmentKind::hyperbolic);
    }
}

TEST(Segmentation, GapBecomesUnmodeled) {
    // Two hyperbolas separated by a drop that neither side explains.
    std::vector<Observation> pts;
    const HyperbolicModel first(0.5, 2.0e-4), second(0.9, 4.0e-4);
    for (int y = 1000; y <= 1500; y += 50) pts.push_back({double(y), evaluate(first, y)});
    for (int y = 1600; y <= 1870; y += 30) pts.push_back({double(y), evaluate(second, y)});
    const auto seg = segment_two_hyperbolic(YearValueSeries(pts));
    ASSERT_EQ(seg.segments.size(), 3u);
    EXPECT_EQ(seg.segments[1].kind, SegmentKind::unmodeled);
    EXPECT_EQ(seg.breakpoints, (std::vector<double>{1500, 1600}));
    EXPECT_NEAR(*seg.k_ratio, 2.0, 1e-9);
}

TEST(Segmentation, TooFewPoints) {
    const auto series = s::generate({s::Hyperbolic{0.5, 2e-4}, s::year_range(1, 5)});
    try {
        segment_two_hyperbolic(series);
        FAIL();
    } catch (const RegimeError& e) {
        EXPECT_EQ(e.kind(), RegimeErrorKind::insufficient_points);
    }
}

TEST(Segmentation, NonHyperbolicSideIsUnmodeled) {
    std::vector<Observation> pts;
    const HyperbolicModel m(0.9, 4.0e-4);
    for (int y = 1000; y <= 1400; y += 100) pts.push_back({double(y), 100.0 - 0.05 * (y - 1000)});
    for (int y = 1500; y <= 2000; y += 100) pts.push_back({double(y), evaluate(m, y)});
    const auto seg = segment_two_hyperbolic(YearValueSeries(pts));
    EXPECT_EQ(seg.segments.front().kind, SegmentKind::unmodeled);
    EXPECT_EQ(seg.segments.back().kind, SegmentKind::hyperbolic);
    EXPECT_FALSE(seg.k_ratio);
}

TEST(Segmentation, AppendDiversionAddsTail) {
    const auto series = s::generate(acceptance::diversion_scenario(0.0, 0));
    auto seg = segment_two_hyperbolic(series.between(1850, 1955));
    const auto fit = *seg.hyperbolic_fits().back();
    const auto finding = detect_diversion(series, fit);
    ASSERT_TRUE(finding);
    append_diversion(seg, series, *finding);
    EXPECT_EQ(seg.segments.back().kind, SegmentKind::diversion);
    EXPECT_EQ(seg.segments.back().window.end_year, 1970);
    EXPECT_EQ(seg.segments.back().direction, Direction::slower);
}
