#pragma once

#include <cstddef>
#include <variant>

#include <Eigen/Dense>

#include "agentctl/control/polynomial.hpp"

namespace agentctl::control {

using Matrix = Eigen::MatrixXd;

inline constexpr double kAxisTolerance = 1e-9;
// Desk-scale bound on the number of states a StateSpace may carry.
inline constexpr std::size_t kMaxStates = 8;

// SISO continuous-time transfer function num(s)/den(s). Always proper and
// with a nonzero leading denominator coefficient.
class TransferFunction {
public:
    const Coefficients& num() const noexcept { return num_; }
    const Coefficients& den() const noexcept { return den_; }
    std::size_t order() const noexcept { return den_.size() - 1; }

    // Same rational function with a monic denominator.
    TransferFunction normalized() const;
    Complex evaluate(Complex s) const;

    friend TransferFunction make_tf(Coefficients num, Coefficients den);

private:
    TransferFunction(Coefficients num, Coefficients den) : num_(std::move(num)), den_(std::move(den)) {}

    Coefficients num_;
    Coefficients den_;
};

// Throws DegenerateSystem for an all-zero denominator and ImproperSystem when
// deg(num) > deg(den) after leading zeros are stripped.
TransferFunction make_tf(Coefficients num, Coefficients den);

class StateSpace {
public:
    const Matrix& A() const noexcept { return a_; }
    const Matrix& B() const noexcept { return b_; }
    const Matrix& C() const noexcept { return c_; }
    const Matrix& D() const noexcept { return d_; }

    Eigen::Index states() const noexcept { return a_.rows(); }
    Eigen::Index inputs() const noexcept { return d_.cols(); }
    Eigen::Index outputs() const noexcept { return d_.rows(); }
    bool is_siso() const noexcept { return inputs() == 1 && outputs() == 1; }

    friend StateSpace make_ss(Matrix a, Matrix b, Matrix c, Matrix d);

private:
    StateSpace(Matrix a, Matrix b, Matrix c, Matrix d)
        : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)), d_(std::move(d)) {}

    Matrix a_, b_, c_, d_;
};

// Zero-state systems are written with empty A/B/C and a p×m D. Empty B and C
// are reshaped to 0×m and p×0 from D. Throws ShapeError on inconsistent
// dimensions or nonfinite entries and UnsupportedShape above kMaxStates.
StateSpace make_ss(Matrix a, Matrix b, Matrix c, Matrix d);

using LinearSystem = std::variant<TransferFunction, StateSpace>;

// Controllable canonical realization (first-row companion form).
StateSpace tf_to_ss(const TransferFunction& sys);
// SISO only; Faddeev–LeVerrier on A. Throws UnsupportedShape for MIMO.
TransferFunction ss_to_tf(const StateSpace& sys);

TransferFunction as_tf(const LinearSystem& sys);
StateSpace as_ss(const LinearSystem& sys);

}  // namespace agentctl::control
