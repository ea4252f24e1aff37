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
#include <numeric>

#include <gtest/gtest.h>

#include <hypergrowth/fit.hpp>
#include <hypergrowth/synth.hpp>

using namespace hypergrowth;
namespace s = hypergrowth::synth;

TEST(Generate, NoiselessHyperbolaMatchesModel) {
    const HyperbolicModel m(1.684e-2, 8.0e-6);
    const auto series = s::generate({s::Hyperbolic{m.a(), m.k()}, s::maddison_year_grid()});
    for (const auto& p : series) EXPECT_EQ(p.value, evaluate(m, p.year));
}

TEST(Generate, NoiselessHyperbolaIsRecoveredByTheFit) {
    const s::Hyperbolic truth{0.3, 1.5e-4};
    const auto fit = fit_hyperbolic(s::generate({truth, s::year_range(1, 1900, 37)}));
    EXPECT_NEAR(fit.model.a(), truth.a, 1e-9 * truth.a);
    EXPECT_NEAR(fit.model.k(), truth.k, 1e-9 * truth.k);
}

TEST(Generate, SameSeedSameSeries) {
    const s::GeneratorSpec spec{s::Hyperbolic{1.684e-2, 8.0e-6}, s::maddison_year_grid(), 0.05, 42};
    EXPECT_EQ(s::generate(spec), s::generate(spec));
    auto other = spec;
    other.seed = 43;
    EXPECT_NE(s::generate(spec), s::generate(other));
}

TEST(Generate, ZeroSigmaIgnoresSeed) {
    const s::GeneratorSpec a{s::Constant{5.0}, s::year_range(0, 10), 0.0, 1};
    const s::GeneratorSpec b{s::Constant{5.0}, s::year_range(0, 10), 0.0, 999};
    EXPECT_EQ(s::generate(a), s::generate(b));
    for (const auto& p : s::generate(a)) EXPECT_EQ(p.value, 5.0);
}

TEST(Generate, NoiseIsLogNormalWithRequestedSigma) {
    constexpr double sigma = 0.05;
    const auto series = s::generate({s::Constant{1.0}, s::year_range(1, 40000), sigma, 7});
    std::vector<double> logs;
    for (const auto& p : series) logs.push_back(std::log(p.value));
    const double n = static_cast<double>(logs.size());
    const double mean = std::accumulate(logs.begin(), logs.end(), 0.0) / n;
    double var = 0.0;
    for (double v : logs) var += (v - mean) * (v - mean);
    const double sd = std::sqrt(var / (n - 1));
    EXPECT_LT(std::abs(mean), 4.0 * sigma / std::sqrt(n));
    EXPECT_NEAR(sd, sigma, 0.02 * sigma);
}

TEST(Shapes, SplicedHyperbolaIsContinuousWithScaledSlope) {
    const s::SplicedTwoHyperbolic shape{1.244e-1, 5.030e-5, 1820.0, 4.2};
    EXPECT_DOUBLE_EQ(shape.second_k(), 4.2 * 5.030e-5);
    const double before = 1.0 / (shape.a - shape.k * shape.break_year);
    const double after = 1.0 / (shape.second_a() - shape.second_k() * shape.break_year);
    EXPECT_NEAR(before, after, 1e-12 * before);
    EXPECT_NEAR(s::exact_value(shape, 1950.0), 1.0 / (shape.second_a() - shape.second_k() * 1950.0), 1e-12);
    EXPECT_NEAR(s::exact_value(shape, 1000.0), 1.0 / (shape.a - shape.k * 1000.0), 1e-12);
}

TEST(Shapes, SlowerTailGrowsAtAFractionOfTheHyperbolicRate) {
    const s::HyperbolicThenSlower shape{1.684e-2, 1.684e-2 / 1965.0, 1955.0, 0.25};
    const double at_break = s::exact_value(shape, 1955.0);
    // d log S / dt of the hyperbola is k S.
    const double hyper_rate = shape.k * at_break;
    const double tail_rate = std::log(s::exact_value(shape, 1965.0) / s::exact_value(shape, 1955.0)) / 10.0;
    EXPECT_NEAR(tail_rate, 0.25 * hyper_rate, 1e-12);
    EXPECT_NEAR(s::exact_value(shape, 1955.0 - 1e-9), at_break, 1e-6 * at_break);
}

TEST(Shapes, StagnationThenTakeoff) {
    const s::StagnationThenTakeoff shape{100.0, 1750.0, 0.02};
    EXPECT_EQ(s::exact_value(shape, 1.0), 100.0);
    EXPECT_EQ(s::exact_value(shape, 1750.0), 100.0);
    EXPECT_NEAR(s::exact_value(shape, 1800.0), 100.0 * std::exp(1.0), 1e-9);
    const s::StagnationThenTakeoff drifting{100.0, 1750.0, 0.02, 0.001};
    EXPECT_NEAR(s::exact_value(drifting, 1650.0), 100.0 * std::exp(-0.1), 1e-9);
}

TEST(Shapes, Exponential) {
    const s::Exponential shape{2.0, 0.01, 1900.0};
    EXPECT_NEAR(s::exact_value(shape, 2000.0), 2.0 * std::exp(1.0), 1e-12);
    EXPECT_EQ(s::kind_name(shape), "exponential");
}

TEST(Generate, RejectsInvalidSpecs) {
    const auto grid = s::maddison_year_grid();
    EXPECT_THROW(s::generate({s::Hyperbolic{1.0, 1e-3}, grid, -0.1}), InvalidSpec);
    EXPECT_THROW(s::generate({s::Hyperbolic{1.0, 1e-3}, {}}), InvalidSpec);
    EXPECT_THROW(s::generate({s::Hyperbolic{1.0, 1e-3}, {5.0, 5.0}}), InvalidSpec);
    // Singularity 1972 lies inside the grid.
    EXPECT_THROW(s::generate({s::Hyperbolic{1.684e-2, 8.539e-6}, grid}), InvalidSpec);
    EXPECT_THROW(s::generate({s::Hyperbolic{1.0, -1e-3}, grid}), InvalidSpec);
    EXPECT_THROW(s::generate({s::Constant{0.0}, grid}), InvalidSpec);
    EXPECT_THROW(s::generate({s::HyperbolicThenSlower{1.684e-2, 1.684e-2 / 1965.0, 1955.0, 1.0}, grid}), InvalidSpec);
    EXPECT_THROW(s::generate({s::SplicedTwoHyperbolic{1.244e-1, 5.030e-5, 1820.0, 0.0}, grid}), InvalidSpec);
}

TEST(Grid, HistoricalSampling) {
    const auto grid = s::maddison_year_grid();
    EXPECT_EQ(grid.size(), 68u);
    EXPECT_EQ(grid.front(), 1.0);
    EXPECT_EQ(grid.back(), 2008.0);
    for (std::size_t i = 1; i < grid.size(); ++i) EXPECT_LT(grid[i - 1], grid[i]);
    for (double y : grid) EXPECT_FALSE(y > 1.0 && y < 1000.0);
}

TEST(Grid, YearRangeIsInclusive) {
    const auto r = s::year_range(1850, 1860, 5);
    ASSERT_EQ(r.size(), 3u);
    EXPECT_EQ(r.back(), 1860.0);
}
