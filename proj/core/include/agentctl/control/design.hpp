#pragma once

#include <optional>
#include <span>
#include <vector>

#include "agentctl/control/linear_system.hpp"

namespace agentctl::control {

// Single-input pole placement by Ackermann's formula. Returns the 1×n gain K
// such that eig(A − B·K) matches `desired`.
//   Uncontrollable    rank of the controllability matrix below n
//   UnsupportedShape  B has more than one column
//   BadPoleSet        wrong pole count or an unpaired complex pole
Matrix acker(const Matrix& a, const Matrix& b, std::span<const Complex> desired);

// Same contract as acker on single-input pairs; multi-input placement is not
// provided and raises UnsupportedShape.
Matrix place(const Matrix& a, const Matrix& b, std::span<const Complex> desired);

struct LqrSolution {
    Matrix K;                // m×n
    Matrix S;                // n×n stabilizing CARE solution
    std::vector<Complex> E;  // eig(A − B·K), sorted
    int iterations = 0;
    double residual = 0.0;  // Frobenius norm of the CARE residual
};

// Continuous-time LQR via Newton–Kleinman iteration.
//   Unstabilizable  an uncontrollable mode is not asymptotically stable
//   SingularWeight  R not symmetric positive definite
//   InvalidWeight   Q not symmetric positive semidefinite
//   NoConvergence   100 iterations without settling
LqrSolution lqr(const Matrix& a, const Matrix& b, const Matrix& q, const Matrix& r);

// ‖AᵀS + SA − SBR⁻¹BᵀS + Q‖_F
double care_residual(const Matrix& a, const Matrix& b, const Matrix& q, const Matrix& r, const Matrix& s);

// Solves Mᵀ·X + X·M = −N by Kronecker vectorization.
Matrix solve_lyapunov(const Matrix& m, const Matrix& n);

// Gain K0 with A − B·K0 Hurwitz. Works on the controllable part from an
// orthogonal staircase split; single-input parts use acker with poles
// {−1, …, −r}, multi-input parts use Bass's method.
Matrix stabilizing_gain(const Matrix& a, const Matrix& b);

// (A − B·K, B, C, D). Throws ShapeError unless K is m×n.
StateSpace closed_loop_state_feedback(const StateSpace& sys, const Matrix& k);

enum class Interconnection { Series, Parallel, Feedback };

// Series g1·g2, parallel g1+g2, negative feedback g1/(1+g1·g2) with unity
// g2 when omitted. Common factors are not cancelled.
TransferFunction interconnect(Interconnection kind, const TransferFunction& g1,
                              const std::optional<TransferFunction>& g2 = std::nullopt);

}  // namespace agentctl::control
