#pragma once

#include <algorithm>
#include <complex>
#include <limits>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <gtest/gtest.h>

namespace agentctl::testing {

using Complex = std::complex<double>;

inline void expect_complex_sets_near(std::vector<Complex> actual, std::vector<Complex> expected, double tol) {
    auto key = [](Complex a, Complex b) {
        if (std::abs(a.real() - b.real()) > 1e-7) return a.real() < b.real();
        return a.imag() < b.imag();
    };
    std::sort(actual.begin(), actual.end(), key);
    std::sort(expected.begin(), expected.end(), key);
    ASSERT_EQ(actual.size(), expected.size());
    for (std::size_t i = 0; i < actual.size(); ++i) {
        EXPECT_NEAR(actual[i].real(), expected[i].real(), tol) << "index " << i;
        EXPECT_NEAR(actual[i].imag(), expected[i].imag(), tol) << "index " << i;
    }
}

inline Eigen::MatrixXd mat(std::initializer_list<std::initializer_list<double>> rows) {
    const auto r = static_cast<Eigen::Index>(rows.size());
    const auto c = r == 0 ? 0 : static_cast<Eigen::Index>(rows.begin()->size());
    Eigen::MatrixXd m(r, c);
    Eigen::Index i = 0;
    for (const auto& row : rows) {
        Eigen::Index j = 0;
        for (double x : row) m(i, j++) = x;
        ++i;
    }
    return m;
}

// Random pole set in the open left half plane with conjugate pairs. Poles are
// kept at least `min_gap` apart: clustered poles are ill-conditioned for any
// eigenvalue routine and have unbounded modal residues.
inline std::vector<Complex> random_stable_poles(std::mt19937& rng, int n, double min_gap = 0.5) {
    std::uniform_real_distribution<double> re(-5.0, -0.5);
    std::uniform_real_distribution<double> im(0.2, 3.0);
    std::vector<Complex> out;
    auto far = [&](Complex p) {
        return std::all_of(out.begin(), out.end(), [&](Complex q) { return std::abs(p - q) >= min_gap; });
    };
    while (static_cast<int>(out.size()) < n) {
        if (n - static_cast<int>(out.size()) >= 2 && rng() % 2 == 0) {
            const Complex p{re(rng), im(rng)};
            if (!far(p) || !far(std::conj(p))) continue;
            out.push_back(p);
            out.push_back(std::conj(p));
        } else {
            const Complex p{re(rng), 0.0};
            if (!far(p)) continue;
            out.push_back(p);
        }
    }
    return out;
}

// Condition number of the controllability matrix [B, AB, ...].
inline double controllability_condition(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    const Eigen::Index n = a.rows();
    Eigen::MatrixXd w(n, n * b.cols());
    Eigen::MatrixXd block = b;
    for (Eigen::Index k = 0; k < n; ++k) {
        w.middleCols(k * b.cols(), b.cols()) = block;
        block = a * block;
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(w);
    const auto& sv = svd.singularValues();
    return sv(0) / sv(sv.size() - 1);
}

// Smallest σ_min([λI − A, B]) over eigenvalues λ of A with Re λ ≥ 0 (PBH
// test); infinity when A is Hurwitz. Small values mean an unstable mode is
// barely reachable from the input.
inline double pbh_margin(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    const Eigen::Index n = a.rows();
    Eigen::EigenSolver<Eigen::MatrixXd> es(a, false);
    double margin = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < n; ++i) {
        const Complex lambda = es.eigenvalues()(i);
        if (lambda.real() < 0.0) continue;
        Eigen::MatrixXcd m(n, n + b.cols());
        m.leftCols(n) = lambda * Eigen::MatrixXcd::Identity(n, n) - a.cast<Complex>();
        m.rightCols(b.cols()) = b.cast<Complex>();
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
        margin = std::min(margin, svd.singularValues()(n - 1));
    }
    return margin;
}

}  // namespace agentctl::testing
