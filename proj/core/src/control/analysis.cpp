#include "agentctl/control/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "agentctl/error.hpp"

namespace agentctl::control {

std::vector<Complex> poles(const LinearSystem& sys) {
    if (const auto* tf = std::get_if<TransferFunction>(&sys)) return roots(tf->den());
    return eigenvalues(std::get<StateSpace>(sys).A());
}

std::vector<Complex> zeros(const LinearSystem& sys) {
    const TransferFunction tf = as_tf(sys);
    if (poly_is_zero(tf.num())) return {};
    return roots(tf.num());
}

StabilityReport is_stable(const LinearSystem& sys) {
    StabilityReport report;
    report.poles = poles(sys);
    for (const Complex& p : report.poles) {
        if (p.real() > kAxisTolerance) {
            ++report.rhp_pole_count;
        } else if (std::abs(p.real()) <= kAxisTolerance) {
            report.marginal = true;
        }
    }
    report.is_stable = report.rhp_pole_count == 0 && !report.marginal;
    if (const auto* tf = std::get_if<TransferFunction>(&sys)) report.routh_rhp_count = routh_rhp_count(tf->den());
    return report;
}

DcGain dc_gain(const LinearSystem& sys) {
    const TransferFunction tf = as_tf(sys);
    const double den0 = tf.den().back();
    double scale = 0.0;
    for (double x : tf.den()) scale = std::max(scale, std::abs(x));
    if (std::abs(den0) <= 1e-12 * scale) return {std::numeric_limits<double>::infinity(), true};
    return {tf.num().back() / den0, false};
}

int numerical_rank(const Matrix& m) {
    if (m.size() == 0) return 0;
    Eigen::JacobiSVD<Matrix> svd(m);
    const auto& sv = svd.singularValues();
    const double sigma_max = sv.size() > 0 ? sv(0) : 0.0;
    const double tol = static_cast<double>(std::max(m.rows(), m.cols())) * std::numeric_limits<double>::epsilon() *
                       sigma_max;
    int rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
        if (sv(i) > tol) ++rank;
    }
    return rank;
}

Controllability controllability_matrix(const Matrix& a, const Matrix& b) {
    const Eigen::Index n = a.rows();
    if (a.cols() != n || b.rows() != n) {
        throw Error(ErrorCode::ShapeError, "controllability needs A n×n and B n×m");
    }
    const Eigen::Index m = b.cols();
    Controllability out;
    out.matrix.resize(n, n * m);
    Matrix block = b;
    for (Eigen::Index k = 0; k < n; ++k) {
        out.matrix.middleCols(k * m, m) = block;
        block = a * block;
    }
    out.rank = numerical_rank(out.matrix);
    return out;
}

}  // namespace agentctl::control
