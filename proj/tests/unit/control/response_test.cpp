#include "agentctl/control/response.hpp"

#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "agentctl/control/analysis.hpp"
#include "agentctl/error.hpp"
#include "test_support.hpp"

namespace agentctl::control {
namespace {

using agentctl::testing::mat;

TEST(TimeResponse, ClosedLoopStepSettlesToDcGain) {
    const auto g = make_tf({1, 3}, {1, 4.16, 3.16});
    const auto data = time_response(g, TimeResponseKind::Step);
    ASSERT_EQ(data.t.size(), kDefaultTimePoints);
    EXPECT_EQ(data.t.front(), 0.0);
    EXPECT_GE(data.t.back(), 8.0 - 1e-9);
    const double final_value = 3.0 / 3.16;
    EXPECT_LE(std::abs(data.y.back() - final_value), 0.01 * final_value);
}

TEST(TimeResponse, OpenLoopDiverges) {
    const auto data = time_response(make_tf({1, 3}, {1, -2, -3}), TimeResponseKind::Step);
    EXPECT_DOUBLE_EQ(data.t.back(), 5.0);
    EXPECT_GT(std::abs(data.y.back()), 100.0);
}

TEST(TimeResponse, ImpulseOfFirstOrderLag) {
    TimeResponseOptions opts;
    opts.horizon = 2.0;
    opts.n_points = 201;
    const auto data = time_response(make_tf({1}, {1, 1}), TimeResponseKind::Impulse, opts);
    EXPECT_NEAR(data.y[0], 1.0, 1e-12);
    EXPECT_NEAR(data.t[100], 1.0, 1e-12);
    EXPECT_NEAR(data.y[100], std::exp(-1.0), 1e-3);
}

TEST(TimeResponse, ForcedRampMatchesClosedForm) {
    // 1/(s + 1) driven by a held sample of u = t: ZOH is exact for piecewise constant input.
    const std::size_t n = 11;
    std::vector<double> u(n, 1.0);
    TimeResponseOptions opts;
    opts.horizon = 1.0;
    opts.u = u;
    const auto data = time_response(make_tf({1}, {1, 1}), TimeResponseKind::Forced, opts);
    for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(data.y[i], 1.0 - std::exp(-data.t[i]), 1e-12);
    EXPECT_EQ(data.u, u);
}

TEST(TimeResponse, StaticGain) {
    const auto data = time_response(make_tf({5}, {1}), TimeResponseKind::Step);
    for (double y : data.y) EXPECT_EQ(y, 5.0);
}

TEST(TimeResponse, DefaultHorizon) {
    EXPECT_NEAR(default_horizon(make_tf({1}, {1, 1})), 8.0, 1e-12);
    EXPECT_NEAR(default_horizon(make_tf({1}, {1, 100})), 1.0, 1e-12);
    EXPECT_NEAR(default_horizon(make_tf({1}, {1, 0.01})), 100.0, 1e-12);
    EXPECT_EQ(default_horizon(make_tf({1}, {1, 0})), 5.0);
}

TEST(TimeResponse, BadGrid) {
    TimeResponseOptions opts;
    opts.horizon = 0.0;
    EXPECT_THROW(time_response(make_tf({1}, {1, 1}), TimeResponseKind::Step, opts), Error);
    opts.horizon = -1.0;
    try {
        time_response(make_tf({1}, {1, 1}), TimeResponseKind::Step, opts);
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::BadGrid);
    }
}

TEST(FrequencyResponse, FirstOrderLagAtCorner) {
    FrequencyOptions opts;
    opts.decades = {{-2.0, 2.0}};
    opts.n_points = 201;
    const auto data = frequency_response(make_tf({1}, {1, 1}), FrequencyKind::Bode, opts);
    EXPECT_NEAR(data.omega[100], 1.0, 1e-12);
    EXPECT_NEAR(data.response[100].real(), 0.5, 1e-12);
    EXPECT_NEAR(data.response[100].imag(), -0.5, 1e-12);
    EXPECT_NEAR(magnitude_db(data)[100], -10.0 * std::log10(2.0), 1e-9);
    EXPECT_NEAR(phase_deg(data)[100], -45.0, 1e-9);
    EXPECT_NEAR(data.response.front().real(), 1.0, 1e-3);
    EXPECT_NEAR(data.response.front().imag(), 0.0, 1e-2);
}

TEST(FrequencyResponse, DefaultGridScalesWithPoles) {
    const auto data = frequency_response(make_tf({1}, {1, 10}), FrequencyKind::Nyquist);
    ASSERT_EQ(data.omega.size(), 200u);
    EXPECT_NEAR(data.omega.front(), 0.1, 1e-12);
    EXPECT_NEAR(data.omega.back(), 1000.0, 1e-9);
    for (std::size_t i = 1; i < data.omega.size(); ++i) EXPECT_GT(data.omega[i], data.omega[i - 1]);
    EXPECT_EQ(data.kind, FrequencyKind::Nyquist);
}

TEST(FrequencyResponse, PoleOnGridIsFlagged) {
    // Poles at ±j; the symmetric decade grid passes through ω = 1.
    FrequencyOptions opts;
    opts.decades = {{-1.0, 1.0}};
    opts.n_points = 3;
    const auto tf = frequency_response(make_tf({1}, {1, 0, 1}), FrequencyKind::Bode, opts);
    ASSERT_EQ(tf.nonfinite.size(), 1u);
    EXPECT_EQ(tf.nonfinite[0], 1u);
    const auto ss = frequency_response(tf_to_ss(make_tf({1}, {1, 0, 1})), FrequencyKind::Bode, opts);
    ASSERT_EQ(ss.nonfinite.size(), 1u);
}

TEST(FrequencyResponse, PhaseIsUnwrapped) {
    // Triple lag: phase falls through −180° to −270° without jumping.
    const auto data = frequency_response(make_tf({1}, {1, 3, 3, 1}), FrequencyKind::Bode);
    const auto ph = phase_deg(data);
    for (std::size_t i = 1; i < ph.size(); ++i) EXPECT_LT(std::abs(ph[i] - ph[i - 1]), 30.0);
    EXPECT_LT(ph.back(), -250.0);
}

TEST(RootLocus, OpenLoopPolesAndBreakaway) {
    const auto g = make_tf({1}, {1, 2, 0});
    const auto data = root_locus_data(g, std::vector<double>{1.0, 5.0});
    ASSERT_EQ(data.gains.size(), 3u);
    EXPECT_EQ(data.gains[0], 0.0);
    EXPECT_NEAR(data.branches[0][0].real(), -2.0, 1e-12);
    EXPECT_EQ(data.branches[0][1], Complex(0.0, 0.0));
    for (const Complex& z : data.branches[1]) EXPECT_NEAR(std::abs(z - Complex(-1.0, 0.0)), 0.0, 1e-6);
}

TEST(RootLocus, DefaultGridAndBranchCount) {
    const auto g = make_tf({1, 1}, {1, 5, 6, 0});
    const auto data = root_locus_data(g);
    ASSERT_EQ(data.gains.size(), 101u);
    EXPECT_EQ(data.gains.front(), 0.0);
    EXPECT_NEAR(data.gains[1], 1e-3, 1e-15);
    EXPECT_NEAR(data.gains.back(), 1e3, 1e-9);
    for (const auto& b : data.branches) EXPECT_EQ(b.size(), g.order());
}

}  // namespace
}  // namespace agentctl::control
