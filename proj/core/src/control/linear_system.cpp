#include "agentctl/control/linear_system.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "agentctl/error.hpp"

namespace agentctl::control {

namespace {

bool all_finite(std::span<const double> c) {
    return std::all_of(c.begin(), c.end(), [](double x) { return std::isfinite(x); });
}

std::string dims(const Matrix& m) { return std::to_string(m.rows()) + "x" + std::to_string(m.cols()); }

}  // namespace

TransferFunction make_tf(Coefficients num, Coefficients den) {
    if (num.empty()) num = {0.0};
    if (!all_finite(num) || !all_finite(den)) {
        throw Error(ErrorCode::DegenerateSystem, "transfer function coefficients must be finite");
    }
    if (den.empty() || poly_is_zero(den)) {
        throw Error(ErrorCode::DegenerateSystem, "denominator has no nonzero coefficient");
    }
    num = strip_leading_zeros(std::move(num));
    den = strip_leading_zeros(std::move(den));
    if (!poly_is_zero(num) && num.size() > den.size()) {
        throw Error(ErrorCode::ImproperSystem, "numerator degree " + std::to_string(num.size() - 1) +
                                                   " exceeds denominator degree " + std::to_string(den.size() - 1));
    }
    return TransferFunction(std::move(num), std::move(den));
}

TransferFunction TransferFunction::normalized() const {
    const double lead = den_.front();
    return TransferFunction(poly_scale(num_, 1.0 / lead), poly_scale(den_, 1.0 / lead));
}

Complex TransferFunction::evaluate(Complex s) const { return poly_eval(num_, s) / poly_eval(den_, s); }

StateSpace make_ss(Matrix a, Matrix b, Matrix c, Matrix d) {
    const Eigen::Index n = a.rows();
    if (a.cols() != n) throw Error(ErrorCode::ShapeError, "A must be square, got " + dims(a));
    if (n == 0) {
        if (b.size() == 0) b.resize(0, d.cols());
        if (c.size() == 0) c.resize(d.rows(), 0);
    }
    if (b.rows() != n) {
        throw Error(ErrorCode::ShapeError, "B must have " + std::to_string(n) + " rows, got " + dims(b));
    }
    if (c.cols() != n) {
        throw Error(ErrorCode::ShapeError, "C must have " + std::to_string(n) + " columns, got " + dims(c));
    }
    if (d.rows() != c.rows() || d.cols() != b.cols()) {
        throw Error(ErrorCode::ShapeError, "D must be " + std::to_string(c.rows()) + "x" + std::to_string(b.cols()) +
                                               ", got " + dims(d));
    }
    if (d.size() == 0) throw Error(ErrorCode::ShapeError, "system needs at least one input and one output");
    if (!a.allFinite() || !b.allFinite() || !c.allFinite() || !d.allFinite()) {
        throw Error(ErrorCode::ShapeError, "state-space entries must be finite");
    }
    if (static_cast<std::size_t>(n) > kMaxStates) {
        throw Error(ErrorCode::UnsupportedShape,
                    std::to_string(n) + " states exceeds the supported maximum of " + std::to_string(kMaxStates));
    }
    return StateSpace(std::move(a), std::move(b), std::move(c), std::move(d));
}

StateSpace tf_to_ss(const TransferFunction& sys) {
    const TransferFunction g = sys.normalized();
    const auto n = static_cast<Eigen::Index>(g.order());
    const Coefficients num = poly_pad(g.num(), g.den().size());
    const Coefficients& den = g.den();

    Matrix a = Matrix::Zero(n, n);
    Matrix b = Matrix::Zero(n, 1);
    Matrix c = Matrix::Zero(1, n);
    Matrix d = Matrix::Constant(1, 1, num[0]);
    for (Eigen::Index j = 0; j < n; ++j) {
        const auto k = static_cast<std::size_t>(j + 1);
        a(0, j) = -den[k];
        c(0, j) = num[k] - den[k] * num[0];
    }
    for (Eigen::Index i = 1; i < n; ++i) a(i, i - 1) = 1.0;
    if (n > 0) b(0, 0) = 1.0;
    return make_ss(std::move(a), std::move(b), std::move(c), std::move(d));
}

TransferFunction ss_to_tf(const StateSpace& sys) {
    if (!sys.is_siso()) {
        throw Error(ErrorCode::UnsupportedShape, "ss2tf supports single-input single-output systems only");
    }
    const Eigen::Index n = sys.states();
    const double d = sys.D()(0, 0);
    if (n == 0) return make_tf({d}, {1.0});

    // Faddeev–LeVerrier: adj(sI − A) = Σ M_k s^(n−1−k), det(sI − A) = Σ c_k s^(n−k).
    Coefficients den(static_cast<std::size_t>(n) + 1, 0.0);
    Coefficients adj_num(static_cast<std::size_t>(n) + 1, 0.0);
    den[0] = 1.0;
    Matrix m = Matrix::Identity(n, n);
    for (Eigen::Index k = 1; k <= n; ++k) {
        adj_num[static_cast<std::size_t>(k)] = (sys.C() * m * sys.B())(0, 0);
        const Matrix am = sys.A() * m;
        const double ck = -am.trace() / static_cast<double>(k);
        den[static_cast<std::size_t>(k)] = ck;
        m = am + ck * Matrix::Identity(n, n);
    }
    Coefficients num = poly_add(adj_num, poly_scale(den, d));
    return make_tf(trim_leading(std::move(num), 1e-12), std::move(den));
}

TransferFunction as_tf(const LinearSystem& sys) {
    if (const auto* tf = std::get_if<TransferFunction>(&sys)) return *tf;
    return ss_to_tf(std::get<StateSpace>(sys));
}

StateSpace as_ss(const LinearSystem& sys) {
    if (const auto* ss = std::get_if<StateSpace>(&sys)) return *ss;
    return tf_to_ss(std::get<TransferFunction>(sys));
}

}  // namespace agentctl::control
