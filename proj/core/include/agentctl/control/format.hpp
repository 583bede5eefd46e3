#pragma once

#include <span>
#include <string>
#include <vector>

#include "agentctl/control/linear_system.hpp"

namespace agentctl::control {

// Prose rendering used in tool observations. Values are rounded to two
// decimals and trailing zeros dropped: 6.16227 -> "6.16", 10.0 -> "10".
std::string format_number(double x);
std::string format_complex(Complex z);
std::string format_vector(std::span<const double> v);
std::string format_complex_list(std::span<const Complex> v);
std::string format_matrix(const Matrix& m);

// "s^2 - 2 s - 3" style with %.4g coefficients.
std::string format_polynomial(std::span<const double> c);
// Numerator over a dashed bar over the denominator.
std::string format_tf(const TransferFunction& tf);
std::string format_ss(const StateSpace& ss);

}  // namespace agentctl::control
