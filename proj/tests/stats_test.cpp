// Copyright 2026 The abnirml Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "abnirml/error.hpp"
#include "abnirml/stats.hpp"
#include "t_oracle.hpp"

namespace abnirml {
namespace {

using testing::grid;
using testing::t_cdf_quadrature;

TEST(TDistribution, AgreesWithQuadratureOnGrid)
{
    auto const points = grid();
    ASSERT_EQ(points.size(), 200U);
    double worst = 0;
    for (auto [t, df] : points) {
        double const err = std::fabs(t_cdf(t, df) - t_cdf_quadrature(t, df));
        worst = std::max(worst, err);
        EXPECT_LT(err, 1e-10) << "t=" << t << " df=" << df;
    }
    RecordProperty("max_abs_error", std::to_string(worst));
}

TEST(TDistribution, KnownPoint)
{
    // Reference value from an independent statistics package.
    EXPECT_NEAR(t_two_sided_p(2.0, 10), 0.07338803477074039, 1e-13);
    EXPECT_NEAR(t_two_sided_p(2.0, 10), 2 * (1 - t_cdf_quadrature(2.0, 10)), 1e-10);
    // df = 1 is Cauchy.
    EXPECT_NEAR(t_cdf(1.0, 1), 0.75, 1e-14);
    EXPECT_NEAR(t_cdf(-3.0, 1), 0.5 + std::atan(-3.0) / std::numbers::pi, 1e-14);
    // df = 2 has a closed form.
    EXPECT_NEAR(t_cdf(1.7, 2), 0.5 + 1.7 / (2 * std::sqrt(2 + 1.7 * 1.7)), 1e-14);
}

TEST(TDistribution, SymmetryIdentity)
{
    for (auto [t, df] : grid()) {
        EXPECT_NEAR(t_cdf(t, df) + t_cdf(-t, df), 1.0, 1e-12) << t << " " << df;
        EXPECT_EQ(t_two_sided_p(t, df), t_two_sided_p(-t, df));
    }
    EXPECT_EQ(t_cdf(0, 3), 0.5);
    EXPECT_EQ(t_two_sided_p(0, 3), 1.0);
    EXPECT_EQ(t_two_sided_p(INFINITY, 3), 0.0);
}

TEST(TDistribution, TwoSidedIsMonotone)
{
    double prev = 1.0;
    for (double t = 0.1; t < 30; t += 0.1) {
        double const p = t_two_sided_p(t, 6);
        EXPECT_LT(p, prev);
        EXPECT_GT(p, 0.0);
        prev = p;
    }
}

TEST(IncompleteBeta, EdgesAndClosedForms)
{
    EXPECT_EQ(incomplete_beta(2, 3, 0), 0.0);
    EXPECT_EQ(incomplete_beta(2, 3, 1), 1.0);
    EXPECT_NEAR(incomplete_beta(1, 1, 0.3), 0.3, 1e-15);
    // I_x(a, 1) = x^a.
    EXPECT_NEAR(incomplete_beta(3.5, 1, 0.6), std::pow(0.6, 3.5), 1e-14);
    EXPECT_NEAR(incomplete_beta(2.5, 4, 0.2) + incomplete_beta(4, 2.5, 0.8), 1.0, 1e-14);
    EXPECT_THROW((void)incomplete_beta(1, 1, 1.5), ValidationError);
    EXPECT_THROW((void)incomplete_beta(0, 1, 0.5), ValidationError);
}

TEST(PairedTTest, HandComputed)
{
    std::vector<std::pair<double, double>> const pairs = {{2, 1}, {4, 2}, {6, 3}, {8, 4}};
    // diffs 1..4: mean 2.5, sample sd sqrt(5/3), n = 4.
    auto const r = paired_t_test(pairs);
    double const t = 2.5 / (std::sqrt(5.0 / 3.0) / 2.0);
    EXPECT_NEAR(r.t, t, 1e-12);
    EXPECT_NEAR(r.p, 2 * (1 - t_cdf_quadrature(t, 3)), 1e-10);
}

TEST(PairedTTest, ShiftAndSwap)
{
    std::mt19937_64 gen(5);
    std::normal_distribution<double> noise(0.1, 1.0);
    std::vector<std::pair<double, double>> pairs;
    for (int i = 0; i < 40; ++i) {
        pairs.emplace_back(noise(gen), noise(gen));
    }
    auto const base = paired_t_test(pairs);
    auto shifted = pairs;
    auto swapped = pairs;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        shifted[i].first += 0.5;  // exact in binary
        shifted[i].second += 0.5;
        std::swap(swapped[i].first, swapped[i].second);
    }
    EXPECT_NEAR(paired_t_test(shifted).t, base.t, 1e-12);
    EXPECT_NEAR(paired_t_test(swapped).t, -base.t, 1e-12);
    EXPECT_NEAR(paired_t_test(swapped).p, base.p, 1e-15);
}

TEST(PairedTTest, DegenerateInputs)
{
    std::vector<std::pair<double, double>> const same = {{1, 1}, {2, 2}, {0, 0}};
    EXPECT_EQ(paired_t_test(same).t, 0.0);
    EXPECT_EQ(paired_t_test(same).p, 1.0);
    std::vector<std::pair<double, double>> const constant = {{1, 0}, {2, 1}, {5, 4}};
    EXPECT_TRUE(std::isinf(paired_t_test(constant).t));
    EXPECT_EQ(paired_t_test(constant).p, 0.0);
    std::vector<std::pair<double, double>> const one = {{1, 0}};
    EXPECT_THROW((void)paired_t_test(one), ValidationError);
}

TEST(Bonferroni, StrictThresholdOverFamily)
{
    std::vector<double> const p = {0.0002, 0.0004, 0.5};
    EXPECT_EQ(bonferroni(p, 0.001, 3), (std::vector<bool>{true, false, false}));
    EXPECT_EQ(bonferroni(p, 0.001, 8), (std::vector<bool>{false, false, false}));
    std::vector<double> const edge = {0.00025};
    EXPECT_EQ(bonferroni(edge, 0.001, 4), std::vector<bool>{false});
    EXPECT_EQ(bonferroni(edge, 0.001, 3), std::vector<bool>{true});
    EXPECT_THROW((void)bonferroni(p, 0.001, 2), ValidationError);
}

}  // namespace
}  // namespace abnirml
