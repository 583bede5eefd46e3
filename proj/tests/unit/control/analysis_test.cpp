#include "agentctl/control/analysis.hpp"

#include <cmath>

#include <gtest/gtest.h>

#include "test_support.hpp"

namespace agentctl::control {
namespace {

using agentctl::testing::expect_complex_sets_near;
using agentctl::testing::mat;

TEST(Poles, FactoredDenominator) {
    expect_complex_sets_near(poles(make_tf({1, 3}, {1, -2, -3})), {{3, 0}, {-1, 0}}, 1e-12);
    expect_complex_sets_near(poles(make_tf({1}, {1, 1})), {{-1, 0}}, 1e-15);
}

TEST(Poles, StateSpaceUsesEigenvalues) {
    expect_complex_sets_near(poles(make_ss(mat({{0, 1}, {-2, -3}}), mat({{0}, {1}}), mat({{1, 0}}), mat({{0}}))),
                             {{-1, 0}, {-2, 0}}, 1e-12);
}

TEST(Poles, PlantHasTwoRightHalfPlanePoles) {
    const auto p = poles(make_tf({1, 7, 10}, {1, 3, 4, 20}));
    ASSERT_EQ(p.size(), 3u);
    EXPECT_EQ(std::count_if(p.begin(), p.end(), [](Complex z) { return z.real() > 0; }), 2);
    // Residual check against the denominator.
    for (const Complex& z : p) EXPECT_LT(std::abs(poly_eval(Coefficients{1, 3, 4, 20}, z)), 1e-10);
}

TEST(Zeros, NumeratorRoots) {
    expect_complex_sets_near(zeros(make_tf({1, 7, 10}, {1, 3, 4, 20})), {{-2, 0}, {-5, 0}}, 1e-12);
    EXPECT_TRUE(zeros(make_tf({1}, {1, 1})).empty());
    expect_complex_sets_near(zeros(make_tf({1, 3}, {1, -2, -3})), {{-3, 0}}, 1e-15);
    EXPECT_TRUE(zeros(make_tf({0}, {1, 1})).empty());
}

TEST(IsStable, PlantIsUnstableWithRouthAgreement) {
    const auto report = is_stable(make_tf({1, 7, 10}, {1, 3, 4, 20}));
    EXPECT_FALSE(report.is_stable);
    EXPECT_EQ(report.rhp_pole_count, 2);
    ASSERT_TRUE(report.routh_rhp_count.has_value());
    EXPECT_EQ(*report.routh_rhp_count, 2);
    EXPECT_FALSE(report.marginal);
}

TEST(IsStable, FirstOrderLag) {
    const auto report = is_stable(make_tf({1}, {1, 1}));
    EXPECT_TRUE(report.is_stable);
    EXPECT_EQ(report.rhp_pole_count, 0);
}

TEST(IsStable, IntegratorIsMarginal) {
    const auto report = is_stable(make_tf({1}, {1, 0}));
    EXPECT_TRUE(report.marginal);
    EXPECT_FALSE(report.is_stable);
    EXPECT_EQ(report.rhp_pole_count, 0);
}

TEST(IsStable, StateSpaceHasNoRouthRoute) {
    const auto report = is_stable(make_ss(mat({{-1}}), mat({{1}}), mat({{1}}), mat({{0}})));
    EXPECT_TRUE(report.is_stable);
    EXPECT_FALSE(report.routh_rhp_count.has_value());
}

TEST(DcGain, FinalValue) {
    const auto g = dc_gain(make_tf({1, 3}, {1, 4.16, 3.16}));
    EXPECT_FALSE(g.infinite);
    EXPECT_NEAR(g.value, 3.0 / 3.16, 1e-15);
    EXPECT_EQ(dc_gain(make_tf({1}, {1})).value, 1.0);
    EXPECT_TRUE(dc_gain(make_tf({1}, {1, 0})).infinite);
}

TEST(Controllability, HandComputedMatrix) {
    const auto c = controllability_matrix(mat({{0, 1}, {-2, -3}}), mat({{0}, {1}}));
    EXPECT_EQ(c.matrix, mat({{0, 1}, {1, -3}}));
    EXPECT_EQ(c.rank, 2);
}

TEST(Controllability, RankDeficientCases) {
    EXPECT_EQ(controllability_matrix(mat({{0, 1}, {-2, -3}}), mat({{0}, {0}})).rank, 0);
    EXPECT_EQ(controllability_matrix(mat({{1, 0}, {0, 1}}), mat({{1}, {1}})).rank, 1);
}

}  // namespace
}  // namespace agentctl::control
