#include "agentctl/control/linear_system.hpp"

#include <random>

#include <gtest/gtest.h>

#include "agentctl/error.hpp"
#include "test_support.hpp"

namespace agentctl::control {
namespace {

using agentctl::testing::mat;

void expect_error(ErrorCode code, const auto& fn) {
    try {
        fn();
        ADD_FAILURE() << "expected " << to_string(code);
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), code) << e.what();
    }
}

TEST(MakeTf, StoresNormalizedCoefficients) {
    const auto g = make_tf({1, 3}, {1, -2, -3});
    EXPECT_EQ(g.num(), (Coefficients{1, 3}));
    EXPECT_EQ(g.den(), (Coefficients{1, -2, -3}));
    EXPECT_EQ(g.order(), 2u);
}

TEST(MakeTf, UnitySystem) {
    const auto g = make_tf({1}, {1});
    EXPECT_EQ(g.order(), 0u);
    EXPECT_EQ(g.evaluate({0.3, 2.0}), Complex(1.0, 0.0));
}

TEST(MakeTf, LeadingZerosDescribeTheSameRationalFunction) {
    const auto a = make_tf({1, 3}, {1, -2, -3});
    const auto b = make_tf({0, 1, 3}, {1, -2, -3});
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int i = 0; i < 5; ++i) {
        const Complex s{u(rng), u(rng)};
        // Direct rational evaluation, independent of the stored form.
        const Complex expected = (s + 3.0) / (s * s - 2.0 * s - 3.0);
        EXPECT_NEAR(std::abs(a.evaluate(s) - expected), 0.0, 1e-12);
        EXPECT_NEAR(std::abs(b.evaluate(s) - expected), 0.0, 1e-12);
    }
}

TEST(MakeTf, Errors) {
    expect_error(ErrorCode::DegenerateSystem, [] { make_tf({1}, {0, 0}); });
    expect_error(ErrorCode::DegenerateSystem, [] { make_tf({1}, {}); });
    expect_error(ErrorCode::ImproperSystem, [] { make_tf({1, 0, 0}, {1, 1}); });
    expect_error(ErrorCode::DegenerateSystem, [] { make_tf({1}, {1, std::nan("")}); });
}

TEST(MakeSs, ValidTwoStateSystem) {
    const auto sys = make_ss(mat({{0, 1}, {-2, -3}}), mat({{0}, {1}}), mat({{1, 0}}), mat({{0}}));
    EXPECT_EQ(sys.states(), 2);
    EXPECT_TRUE(sys.is_siso());
    EXPECT_EQ(sys.A()(1, 0), -2.0);
}

TEST(MakeSs, StaticGain) {
    const auto sys = make_ss(Matrix(0, 0), Matrix(0, 0), Matrix(0, 0), mat({{5}}));
    EXPECT_EQ(sys.states(), 0);
    EXPECT_EQ(sys.D()(0, 0), 5.0);
}

TEST(MakeSs, Errors) {
    expect_error(ErrorCode::ShapeError,
                 [] { make_ss(mat({{0, 1}, {-2, -3}}), mat({{0}, {1}, {2}}), mat({{1, 0}}), mat({{0}})); });
    expect_error(ErrorCode::ShapeError, [] { make_ss(mat({{0, 1}}), mat({{0}}), mat({{1, 0}}), mat({{0}})); });
    expect_error(ErrorCode::ShapeError,
                 [] { make_ss(mat({{0, 1}, {-2, -3}}), mat({{0}, {1}}), mat({{1, 0}}), mat({{0, 0}})); });
    expect_error(ErrorCode::UnsupportedShape, [] {
        make_ss(Matrix::Identity(9, 9), Matrix::Ones(9, 1), Matrix::Ones(1, 9), Matrix::Zero(1, 1));
    });
}

TEST(TfToSs, CanonicalRealization) {
    const auto ss = tf_to_ss(make_tf({1, 3}, {1, -2, -3}));
    EXPECT_EQ(ss.A(), mat({{2, 3}, {1, 0}}));
    EXPECT_EQ(ss.B(), mat({{1}, {0}}));
    EXPECT_EQ(ss.C(), mat({{1, 3}}));
    EXPECT_EQ(ss.D(), mat({{0}}));
}

TEST(TfToSs, FirstOrderAndStaticGain) {
    const auto first = tf_to_ss(make_tf({1}, {1, 1}));
    EXPECT_EQ(first.A(), mat({{-1}}));
    EXPECT_EQ(first.B(), mat({{1}}));
    EXPECT_EQ(first.C(), mat({{1}}));
    EXPECT_EQ(first.D(), mat({{0}}));

    const auto gain = tf_to_ss(make_tf({5}, {1}));
    EXPECT_EQ(gain.states(), 0);
    EXPECT_EQ(gain.D(), mat({{5}}));
}

TEST(TfToSs, BiproperFeedthrough) {
    // (2s + 1)/(s + 3) = 2 − 5/(s + 3)
    const auto ss = tf_to_ss(make_tf({2, 1}, {1, 3}));
    EXPECT_EQ(ss.D()(0, 0), 2.0);
    EXPECT_EQ(ss.C()(0, 0), -5.0);
}

TEST(SsToTf, ClosedLoopFromLqrGain) {
    const auto tf = ss_to_tf(make_ss(mat({{-4.16, -3.16}, {1, 0}}), mat({{1}, {0}}), mat({{1, 3}}), mat({{0}})));
    ASSERT_EQ(tf.num().size(), 2u);
    ASSERT_EQ(tf.den().size(), 3u);
    EXPECT_NEAR(tf.num()[0], 1.0, 1e-9);
    EXPECT_NEAR(tf.num()[1], 3.0, 1e-9);
    EXPECT_NEAR(tf.den()[0], 1.0, 1e-9);
    EXPECT_NEAR(tf.den()[1], 4.16, 1e-9);
    EXPECT_NEAR(tf.den()[2], 3.16, 1e-9);
}

TEST(SsToTf, StaticGainAndMimo) {
    const auto tf = ss_to_tf(make_ss(Matrix(0, 0), Matrix(0, 0), Matrix(0, 0), mat({{5}})));
    EXPECT_EQ(tf.num(), (Coefficients{5}));
    EXPECT_EQ(tf.den(), (Coefficients{1}));
    expect_error(ErrorCode::UnsupportedShape,
                 [] { ss_to_tf(make_ss(mat({{-1}}), mat({{1, 1}}), mat({{1}}), mat({{0, 0}}))); });
}

TEST(SsToTf, MatchesResolventEvaluation) {
    const Matrix a = mat({{0, 1, 0}, {0, 0, 1}, {-6, -11, -6}});
    const Matrix b = mat({{0}, {0}, {1}});
    const Matrix c = mat({{2, 1, 0}});
    const Matrix d = mat({{0.5}});
    const auto tf = ss_to_tf(make_ss(a, b, c, d));
    for (double w : {0.1, 1.0, 7.0}) {
        const Complex s{0.2, w};
        const Eigen::MatrixXcd m = s * Eigen::MatrixXcd::Identity(3, 3) - a.cast<Complex>();
        const Complex direct = (c.cast<Complex>() * m.inverse() * b.cast<Complex>())(0, 0) + 0.5;
        EXPECT_NEAR(std::abs(tf.evaluate(s) - direct), 0.0, 1e-10);
    }
}

}  // namespace
}  // namespace agentctl::control
