#pragma once

#include <optional>
#include <vector>

#include "agentctl/control/linear_system.hpp"

namespace agentctl::control {

struct StabilityReport {
    bool is_stable = false;
    int rhp_pole_count = 0;
    // A pole lies within kAxisTolerance of the imaginary axis.
    bool marginal = false;
    std::vector<Complex> poles;
    // Second route for transfer-function inputs.
    std::optional<int> routh_rhp_count;
};

struct DcGain {
    double value = 0.0;
    // den(0) = 0: the gain is unbounded and `value` is meaningless.
    bool infinite = false;
};

struct Controllability {
    Matrix matrix;
    int rank = 0;
};

std::vector<Complex> poles(const LinearSystem& sys);
// SISO numerator roots; a zero numerator has no zeros.
std::vector<Complex> zeros(const LinearSystem& sys);

StabilityReport is_stable(const LinearSystem& sys);
DcGain dc_gain(const LinearSystem& sys);

// Numerical rank uses singular values above max(rows, cols)·ε·σ_max.
int numerical_rank(const Matrix& m);
Controllability controllability_matrix(const Matrix& a, const Matrix& b);

}  // namespace agentctl::control
