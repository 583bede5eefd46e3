#pragma once

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace agentctl::control {

using Complex = std::complex<double>;
// Real polynomial coefficients, highest power of s first.
using Coefficients = std::vector<double>;

// Drops leading exact zeros; an all-zero input collapses to {0}.
Coefficients strip_leading_zeros(Coefficients c);
// Drops leading coefficients whose magnitude is below rel_tol * max|c|.
Coefficients trim_leading(Coefficients c, double rel_tol);

Coefficients poly_multiply(std::span<const double> a, std::span<const double> b);
Coefficients poly_add(std::span<const double> a, std::span<const double> b);
Coefficients poly_scale(std::span<const double> a, double k);
// Left-pads with zeros to `size` coefficients.
Coefficients poly_pad(std::span<const double> a, std::size_t size);
bool poly_is_zero(std::span<const double> a);

Complex poly_eval(std::span<const double> c, Complex s);
double poly_eval(std::span<const double> c, double s);

// Monic polynomial with the given roots. Imaginary residue from conjugate
// pairs is discarded; callers check pairing beforehand.
Coefficients poly_from_roots(std::span<const Complex> roots);

// Sorted by (real, imag). Trailing zero coefficients give exact zero roots;
// the remaining factor goes through the balanced companion matrix and the
// real Schur eigenvalue routine.
std::vector<Complex> roots(std::span<const double> c);

// Eigenvalues of a square real matrix, sorted by (real, imag).
std::vector<Complex> eigenvalues(const Eigen::MatrixXd& a);

void sort_complex(std::vector<Complex>& values);

// Number of right-half-plane roots from the Routh array sign changes.
// Zero pivots are replaced by a small epsilon; an all-zero row is rebuilt
// from the derivative of the auxiliary polynomial.
int routh_rhp_count(std::span<const double> c);

}  // namespace agentctl::control
