#include "agentctl/control/design.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>

#include "agentctl/control/analysis.hpp"
#include "agentctl/error.hpp"

namespace agentctl::control {

namespace {

constexpr int kMaxNewtonIterations = 100;

void check_pair(const Matrix& a, const Matrix& b) {
    if (a.rows() != a.cols()) throw Error(ErrorCode::ShapeError, "A must be square");
    if (b.rows() != a.rows()) {
        throw Error(ErrorCode::ShapeError, "B must have " + std::to_string(a.rows()) + " rows");
    }
    if (static_cast<std::size_t>(a.rows()) > kMaxStates) {
        throw Error(ErrorCode::UnsupportedShape, "at most " + std::to_string(kMaxStates) + " states are supported");
    }
}

void check_pole_set(std::span<const Complex> desired, Eigen::Index n) {
    if (static_cast<Eigen::Index>(desired.size()) != n) {
        throw Error(ErrorCode::BadPoleSet, "expected " + std::to_string(n) + " poles, got " +
                                               std::to_string(desired.size()));
    }
    std::vector<bool> used(desired.size(), false);
    for (std::size_t i = 0; i < desired.size(); ++i) {
        const Complex p = desired[i];
        if (!std::isfinite(p.real()) || !std::isfinite(p.imag())) {
            throw Error(ErrorCode::BadPoleSet, "poles must be finite");
        }
        const double tol = 1e-9 * (1.0 + std::abs(p));
        if (std::abs(p.imag()) <= tol || used[i]) continue;
        bool paired = false;
        for (std::size_t j = i + 1; j < desired.size(); ++j) {
            if (!used[j] && std::abs(desired[j] - std::conj(p)) <= tol) {
                used[j] = true;
                paired = true;
                break;
            }
        }
        if (!paired) throw Error(ErrorCode::BadPoleSet, "complex pole without its conjugate");
        used[i] = true;
    }
}

Matrix poly_of_matrix(std::span<const double> c, const Matrix& a) {
    Matrix acc = Matrix::Zero(a.rows(), a.cols());
    const Matrix eye = Matrix::Identity(a.rows(), a.cols());
    for (double x : c) acc = acc * a + x * eye;
    return acc;
}

bool is_hurwitz(const Matrix& a) {
    const auto ev = eigenvalues(a);
    return std::all_of(ev.begin(), ev.end(), [](Complex z) { return z.real() < -kAxisTolerance; });
}

// Bass: with β > ‖A‖, solve (A + βI)P + P(A + βI)ᵀ = 2BBᵀ; K = BᵀP⁻¹ gives
// (A − BK)P + P(A − BK)ᵀ = −2βP.
Matrix bass_gain(const Matrix& a, const Matrix& b) {
    const Eigen::Index n = a.rows();
    const double beta = 1.0 + a.norm();
    const Matrix shifted = a + beta * Matrix::Identity(n, n);
    const Matrix p = solve_lyapunov(-shifted.transpose(), 2.0 * b * b.transpose());
    return b.transpose() * p.inverse();
}

bool is_symmetric(const Matrix& m) { return (m - m.transpose()).norm() <= 1e-10 * (1.0 + m.norm()); }

template <typename T>
using MatrixT = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;

template <typename T>
MatrixT<T> kron(const MatrixT<T>& x, const MatrixT<T>& y) {
    MatrixT<T> out(x.rows() * y.rows(), x.cols() * y.cols());
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        for (Eigen::Index j = 0; j < x.cols(); ++j) out.block(i * y.rows(), j * y.cols(), y.rows(), y.cols()) = x(i, j) * y;
    }
    return out;
}

// Mᵀ·X + X·M = −N through vec(MᵀX + XM) = (I⊗Mᵀ + Mᵀ⊗I)·vec(X).
template <typename T>
MatrixT<T> lyapunov_kron(const MatrixT<T>& m, const MatrixT<T>& n) {
    const Eigen::Index k = m.rows();
    const MatrixT<T> eye = MatrixT<T>::Identity(k, k);
    const MatrixT<T> mt = m.transpose();
    const MatrixT<T> op = kron<T>(eye, mt) + kron<T>(mt, eye);
    Eigen::FullPivLU<MatrixT<T>> lu(op);
    if (!lu.isInvertible()) throw Error(ErrorCode::NoConvergence, "Lyapunov operator is singular");
    const Eigen::Matrix<T, Eigen::Dynamic, 1> rhs = -Eigen::Map<const Eigen::Matrix<T, Eigen::Dynamic, 1>>(n.data(), k * k);
    const Eigen::Matrix<T, Eigen::Dynamic, 1> x = lu.solve(rhs);
    MatrixT<T> out = Eigen::Map<const MatrixT<T>>(x.data(), k, k);
    return (out + out.transpose().eval()) / T(2);
}

}  // namespace

Matrix acker(const Matrix& a, const Matrix& b, std::span<const Complex> desired) {
    check_pair(a, b);
    if (b.cols() != 1) throw Error(ErrorCode::UnsupportedShape, "pole placement supports single-input systems only");
    const Eigen::Index n = a.rows();
    check_pole_set(desired, n);
    const Controllability wc = controllability_matrix(a, b);
    if (wc.rank < n) {
        throw Error(ErrorCode::Uncontrollable, "controllability matrix has rank " + std::to_string(wc.rank) +
                                                   " < " + std::to_string(n));
    }
    const Coefficients phi = poly_from_roots(desired);
    Eigen::VectorXd e_n = Eigen::VectorXd::Zero(n);
    e_n(n - 1) = 1.0;
    const Eigen::VectorXd row = wc.matrix.transpose().fullPivLu().solve(e_n);
    return row.transpose() * poly_of_matrix(phi, a);
}

Matrix place(const Matrix& a, const Matrix& b, std::span<const Complex> desired) {
    check_pair(a, b);
    if (b.cols() != 1) throw Error(ErrorCode::UnsupportedShape, "multi-input pole placement is not provided");
    return acker(a, b, desired);
}

Matrix solve_lyapunov(const Matrix& m, const Matrix& n) {
    const Eigen::Index k = m.rows();
    if (m.cols() != k || n.rows() != k || n.cols() != k) {
        throw Error(ErrorCode::ShapeError, "Lyapunov operands must be square and of equal size");
    }
    return lyapunov_kron<double>(m, n);
}

Matrix stabilizing_gain(const Matrix& a, const Matrix& b) {
    check_pair(a, b);
    const Eigen::Index n = a.rows();
    const Eigen::Index m = b.cols();
    const Controllability wc = controllability_matrix(a, b);
    const Eigen::Index r = wc.rank;

    auto controllable_gain = [](const Matrix& ac, const Matrix& bc) -> Matrix {
        if (bc.cols() == 1) {
            std::vector<Complex> target;
            for (Eigen::Index i = 1; i <= ac.rows(); ++i) target.emplace_back(-static_cast<double>(i), 0.0);
            return acker(ac, bc, target);
        }
        return bass_gain(ac, bc);
    };

    if (r == n) return controllable_gain(a, b);

    Eigen::JacobiSVD<Matrix> svd(wc.matrix, Eigen::ComputeFullU);
    const Matrix u = svd.matrixU();
    const Matrix at = u.transpose() * a * u;
    const Matrix bt = u.transpose() * b;
    const Matrix auu = at.bottomRightCorner(n - r, n - r);
    if (!is_hurwitz(auu)) {
        throw Error(ErrorCode::Unstabilizable, "an uncontrollable mode is not asymptotically stable");
    }
    Matrix kt = Matrix::Zero(m, n);
    if (r > 0) kt.leftCols(r) = controllable_gain(at.topLeftCorner(r, r), bt.topRows(r));
    return kt * u.transpose();
}

double care_residual(const Matrix& a, const Matrix& b, const Matrix& q, const Matrix& r, const Matrix& s) {
    const Matrix rinv_bt = r.ldlt().solve(b.transpose());
    return (a.transpose() * s + s * a - s * b * rinv_bt * s + q).norm();
}

LqrSolution lqr(const Matrix& a, const Matrix& b, const Matrix& q, const Matrix& r) {
    check_pair(a, b);
    const Eigen::Index n = a.rows();
    const Eigen::Index m = b.cols();
    if (q.rows() != n || q.cols() != n) throw Error(ErrorCode::ShapeError, "Q must be " + std::to_string(n) + "x" + std::to_string(n));
    if (r.rows() != m || r.cols() != m) throw Error(ErrorCode::ShapeError, "R must be " + std::to_string(m) + "x" + std::to_string(m));
    if (!q.allFinite() || !r.allFinite()) throw Error(ErrorCode::InvalidWeight, "weights must be finite");

    if (!is_symmetric(r)) throw Error(ErrorCode::SingularWeight, "R must be symmetric");
    Eigen::SelfAdjointEigenSolver<Matrix> r_eig(r, Eigen::EigenvaluesOnly);
    if (r_eig.eigenvalues().minCoeff() <= 1e-12 * (1.0 + r.norm())) {
        throw Error(ErrorCode::SingularWeight, "R must be positive definite");
    }
    if (!is_symmetric(q)) throw Error(ErrorCode::InvalidWeight, "Q must be symmetric");
    Eigen::SelfAdjointEigenSolver<Matrix> q_eig(q, Eigen::EigenvaluesOnly);
    if (q_eig.eigenvalues().minCoeff() < -1e-10 * (1.0 + q.norm())) {
        throw Error(ErrorCode::InvalidWeight, "Q must be positive semidefinite");
    }

    const Eigen::LDLT<Matrix> r_fact(r);
    const Matrix rinv_bt = r_fact.solve(b.transpose());

    LqrSolution out;
    Matrix k = stabilizing_gain(a, b);
    Matrix s = Matrix::Zero(n, n);
    double prev_delta = std::numeric_limits<double>::infinity();
    bool converged = false;
    for (int it = 1; it <= kMaxNewtonIterations; ++it) {
        const Matrix ak = a - b * k;
        const Matrix next = solve_lyapunov(ak, q + k.transpose() * r * k);
        if (!next.allFinite()) break;
        const double delta = (next - s).norm();
        const double scale = std::max(1.0, next.norm());
        s = next;
        k = rinv_bt * s;
        out.iterations = it;
        // Quadratic convergence stalls at roundoff; a non-decreasing tiny step means done.
        if (delta <= 1e-13 * scale || (delta <= 1e-9 * scale && delta >= prev_delta)) {
            converged = true;
            break;
        }
        prev_delta = delta;
    }
    if (!converged) {
        throw Error(ErrorCode::NoConvergence,
                    "Newton-Kleinman did not settle within " + std::to_string(kMaxNewtonIterations) + " iterations");
    }
    out.S = 0.5 * (s + s.transpose());
    out.K = rinv_bt * out.S;
    out.E = eigenvalues(a - b * out.K);
    out.residual = care_residual(a, b, q, r, out.S);
    return out;
}

StateSpace closed_loop_state_feedback(const StateSpace& sys, const Matrix& k) {
    if (k.rows() != sys.inputs() || k.cols() != sys.states()) {
        throw Error(ErrorCode::ShapeError, "K must be " + std::to_string(sys.inputs()) + "x" +
                                               std::to_string(sys.states()) + ", got " + std::to_string(k.rows()) +
                                               "x" + std::to_string(k.cols()));
    }
    return make_ss(sys.A() - sys.B() * k, sys.B(), sys.C(), sys.D());
}

TransferFunction interconnect(Interconnection kind, const TransferFunction& g1,
                              const std::optional<TransferFunction>& g2) {
    const TransferFunction h = g2.value_or(make_tf({1.0}, {1.0}));
    const Coefficients& n1 = g1.num();
    const Coefficients& d1 = g1.den();
    const Coefficients& n2 = h.num();
    const Coefficients& d2 = h.den();
    switch (kind) {
        case Interconnection::Series:
            return make_tf(poly_multiply(n1, n2), poly_multiply(d1, d2));
        case Interconnection::Parallel:
            return make_tf(poly_add(poly_multiply(n1, d2), poly_multiply(n2, d1)), poly_multiply(d1, d2));
        case Interconnection::Feedback:
            return make_tf(poly_multiply(n1, d2), poly_add(poly_multiply(d1, d2), poly_multiply(n1, n2)));
    }
    throw Error(ErrorCode::DegenerateSystem, "unknown interconnection");
}

}  // namespace agentctl::control
