#include "agentctl/control/design.hpp"

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "agentctl/control/analysis.hpp"
#include "agentctl/error.hpp"
#include "test_support.hpp"

namespace agentctl::control {
namespace {

using agentctl::testing::expect_complex_sets_near;
using agentctl::testing::mat;

ErrorCode code_of(const auto& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no error raised";
    return ErrorCode::ValidationError;
}

TEST(Acker, ThirdOrderPlacementGolden) {
    const std::vector<Complex> poles{{-3, 0}, {-4, 0}};
    const Matrix k = acker(mat({{0, 1}, {-2, -3}}), mat({{0}, {1}}), poles);
    ASSERT_EQ(k.rows(), 1);
    ASSERT_EQ(k.cols(), 2);
    EXPECT_NEAR(k(0, 0), 10.0, 1e-9);
    EXPECT_NEAR(k(0, 1), 4.0, 1e-9);
}

TEST(Acker, DesiredEqualsOpenLoop) {
    const std::vector<Complex> poles{{-3, 0}, {-4, 0}};
    const Matrix k = acker(mat({{0, 1}, {-12, -7}}), mat({{0}, {1}}), poles);
    EXPECT_NEAR(k.norm(), 0.0, 1e-12);
}

TEST(Acker, DoubleIntegratorMatchesCharacteristicPolynomial) {
    const Matrix a = mat({{0, 1}, {0, 0}});
    const Matrix b = mat({{0}, {1}});
    const std::vector<Complex> poles{{-1, 0}, {-1, 0}};
    const Matrix k = acker(a, b, poles);
    // det(sI − A + BK) = s² + k2·s + k1 must equal s² + 2s + 1.
    const Matrix acl = a - b * k;
    EXPECT_NEAR(-acl.trace(), 2.0, 1e-12);
    EXPECT_NEAR(acl.determinant(), 1.0, 1e-12);
    EXPECT_NEAR(k(0, 0), 1.0, 1e-12);
    EXPECT_NEAR(k(0, 1), 2.0, 1e-12);
}

TEST(Acker, ComplexPair) {
    const std::vector<Complex> poles{{-1, 2}, {-1, -2}};
    const Matrix a = mat({{0, 1}, {-2, -3}});
    const Matrix b = mat({{0}, {1}});
    expect_complex_sets_near(eigenvalues(a - b * acker(a, b, poles)), poles, 1e-9);
}

TEST(Acker, Errors) {
    const std::vector<Complex> two{{-3, 0}, {-4, 0}};
    EXPECT_EQ(code_of([&] { acker(mat({{1, 0}, {0, 1}}), mat({{1}, {1}}), two); }), ErrorCode::Uncontrollable);
    EXPECT_EQ(code_of([&] { acker(mat({{0, 1}, {-2, -3}}), mat({{0, 1}, {1, 0}}), two); }),
              ErrorCode::UnsupportedShape);
    const std::vector<Complex> unpaired{{-1, 1}, {-2, 0}};
    EXPECT_EQ(code_of([&] { acker(mat({{0, 1}, {-2, -3}}), mat({{0}, {1}}), unpaired); }), ErrorCode::BadPoleSet);
    const std::vector<Complex> one{{-1, 0}};
    EXPECT_EQ(code_of([&] { acker(mat({{0, 1}, {-2, -3}}), mat({{0}, {1}}), one); }), ErrorCode::BadPoleSet);
}

TEST(Place, SameContractAsAcker) {
    const std::vector<Complex> poles{{-3, 0}, {-4, 0}};
    const Matrix a = mat({{0, 1}, {-2, -3}});
    const Matrix b = mat({{0}, {1}});
    EXPECT_NEAR((place(a, b, poles) - acker(a, b, poles)).norm(), 0.0, 1e-15);
    EXPECT_EQ(code_of([&] { place(a, mat({{0, 1}, {1, 0}}), poles); }), ErrorCode::UnsupportedShape);
}

TEST(Lqr, GoldenTwoState) {
    const auto sol = lqr(mat({{2, 3}, {1, 0}}), mat({{1}, {0}}), Matrix::Identity(2, 2), mat({{1}}));
    // Closed form: K = [3 + √10, 3 + √10], S = [[3 + √10, 3 + √10], [3 + √10, 4 + √10]], E = {−√10, −1}.
    const double r10 = std::sqrt(10.0);
    EXPECT_NEAR(sol.K(0, 0), 3 + r10, 1e-10);
    EXPECT_NEAR(sol.K(0, 1), 3 + r10, 1e-10);
    EXPECT_NEAR(sol.S(0, 0), 3 + r10, 1e-10);
    EXPECT_NEAR(sol.S(0, 1), 3 + r10, 1e-10);
    EXPECT_NEAR(sol.S(1, 1), 4 + r10, 1e-10);
    expect_complex_sets_near(sol.E, {{-r10, 0}, {-1, 0}}, 1e-9);
    EXPECT_LE(sol.residual, 1e-8);
}

TEST(Lqr, ScalarRiccati) {
    const auto sol = lqr(mat({{0}}), mat({{1}}), mat({{1}}), mat({{1}}));
    EXPECT_NEAR(sol.S(0, 0), 1.0, 1e-12);
    EXPECT_NEAR(sol.K(0, 0), 1.0, 1e-12);
    expect_complex_sets_near(sol.E, {{-1, 0}}, 1e-12);
}

TEST(Lqr, MultiInputUsesBassInitializer) {
    const Matrix a = mat({{1, 2, 0}, {0, 1, 1}, {1, 0, 2}});
    const Matrix b = mat({{1, 0}, {0, 0}, {0, 1}});
    const auto sol = lqr(a, b, Matrix::Identity(3, 3), Matrix::Identity(2, 2));
    EXPECT_LE(sol.residual, 1e-8);
    for (const Complex& e : sol.E) EXPECT_LT(e.real(), 0.0);
}

TEST(Lqr, StabilizableButUncontrollable) {
    // Second state is decoupled from the input and stable.
    const Matrix a = mat({{1, 0}, {0, -2}});
    const Matrix b = mat({{1}, {0}});
    const auto sol = lqr(a, b, Matrix::Identity(2, 2), mat({{1}}));
    EXPECT_LE(sol.residual, 1e-8);
    // Scalar Riccati on the controllable mode: −S² + 2S + 1 = 0.
    EXPECT_NEAR(sol.S(0, 0), 1 + std::sqrt(2.0), 1e-10);
    EXPECT_NEAR(sol.S(1, 1), 0.25, 1e-10);
}

TEST(Lqr, Errors) {
    const Matrix a = mat({{2, 3}, {1, 0}});
    const Matrix b = mat({{1}, {0}});
    EXPECT_EQ(code_of([&] { lqr(mat({{1, 0}, {0, 1}}), mat({{1}, {0}}), Matrix::Identity(2, 2), mat({{1}})); }),
              ErrorCode::Unstabilizable);
    EXPECT_EQ(code_of([&] { lqr(a, b, Matrix::Identity(2, 2), mat({{0}})); }), ErrorCode::SingularWeight);
    EXPECT_EQ(code_of([&] { lqr(a, b, mat({{1, 0}, {0, -1}}), mat({{1}})); }), ErrorCode::InvalidWeight);
    EXPECT_EQ(code_of([&] { lqr(a, b, Matrix::Identity(3, 3), mat({{1}})); }), ErrorCode::ShapeError);
}

TEST(Lyapunov, SolvesTheStatedEquation) {
    const Matrix m = mat({{-1, 2}, {0, -3}});
    const Matrix n = mat({{2, 1}, {1, 4}});
    const Matrix x = solve_lyapunov(m, n);
    EXPECT_NEAR((m.transpose() * x + x * m + n).norm(), 0.0, 1e-12);
}

TEST(ClosedLoop, LqrGainFromTranscript) {
    const auto sys = make_ss(mat({{2, 3}, {1, 0}}), mat({{1}, {0}}), mat({{1, 3}}), mat({{0}}));
    const auto cl = closed_loop_state_feedback(sys, mat({{6.16, 6.16}}));
    EXPECT_NEAR((cl.A() - mat({{-4.16, -3.16}, {1, 0}})).norm(), 0.0, 1e-12);
    EXPECT_EQ(closed_loop_state_feedback(sys, Matrix::Zero(1, 2)).A(), sys.A());
    EXPECT_EQ(code_of([&] { closed_loop_state_feedback(sys, Matrix::Zero(2, 2)); }), ErrorCode::ShapeError);
}

TEST(ClosedLoop, EigenvaluesMatchLqrSpectrum) {
    const auto sys = make_ss(mat({{2, 3}, {1, 0}}), mat({{1}, {0}}), mat({{1, 3}}), mat({{0}}));
    const auto sol = lqr(sys.A(), sys.B(), Matrix::Identity(2, 2), mat({{1}}));
    expect_complex_sets_near(eigenvalues(closed_loop_state_feedback(sys, sol.K).A()), sol.E, 1e-9);
}

TEST(Interconnect, SeriesParallelFeedback) {
    const auto g1 = make_tf({1}, {1, 1});
    const auto g2 = make_tf({1}, {1, 2});
    const auto s = interconnect(Interconnection::Series, g1, g2);
    EXPECT_EQ(s.num(), (Coefficients{1}));
    EXPECT_EQ(s.den(), (Coefficients{1, 3, 2}));

    const auto p = interconnect(Interconnection::Parallel, g1, g2);
    EXPECT_EQ(p.num(), (Coefficients{2, 3}));
    EXPECT_EQ(p.den(), (Coefficients{1, 3, 2}));

    const double k = 4.0;
    const auto f = interconnect(Interconnection::Feedback, make_tf({k}, {1, 0}));
    EXPECT_EQ(f.num(), (Coefficients{k}));
    EXPECT_EQ(f.den(), (Coefficients{1, k}));

    const auto unity = interconnect(Interconnection::Series, g1, make_tf({1}, {1}));
    EXPECT_EQ(unity.num(), g1.num());
    EXPECT_EQ(unity.den(), g1.den());
}

TEST(Interconnect, DegenerateFeedback) {
    EXPECT_EQ(code_of([] { interconnect(Interconnection::Feedback, make_tf({-1}, {1})); }),
              ErrorCode::DegenerateSystem);
}

}  // namespace
}  // namespace agentctl::control
