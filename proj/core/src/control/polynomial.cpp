#include "agentctl/control/polynomial.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

namespace agentctl::control {

namespace {

double max_abs(std::span<const double> c) {
    double m = 0.0;
    for (double x : c) m = std::max(m, std::abs(x));
    return m;
}

// Parlett–Reinsch balancing with radix 2; leaves eigenvalues unchanged and
// evens out row/column norms of the companion matrix.
void balance(Eigen::MatrixXd& a) {
    constexpr double radix = 2.0;
    constexpr double sqrdx = radix * radix;
    const Eigen::Index n = a.rows();
    bool done = false;
    while (!done) {
        done = true;
        for (Eigen::Index i = 0; i < n; ++i) {
            double r = 0.0;
            double c = 0.0;
            for (Eigen::Index j = 0; j < n; ++j) {
                if (j == i) continue;
                c += std::abs(a(j, i));
                r += std::abs(a(i, j));
            }
            if (c == 0.0 || r == 0.0) continue;
            double g = r / radix;
            double f = 1.0;
            const double s = c + r;
            while (c < g) {
                f *= radix;
                c *= sqrdx;
            }
            g = r * radix;
            while (c > g) {
                f /= radix;
                c /= sqrdx;
            }
            if ((c + r) / f < 0.95 * s) {
                done = false;
                a.row(i) /= f;
                a.col(i) *= f;
            }
        }
    }
}

}  // namespace

Coefficients strip_leading_zeros(Coefficients c) {
    auto first = std::find_if(c.begin(), c.end(), [](double x) { return x != 0.0; });
    if (first == c.end()) return {0.0};
    c.erase(c.begin(), first);
    return c;
}

Coefficients trim_leading(Coefficients c, double rel_tol) {
    const double tol = rel_tol * max_abs(c);
    auto first = std::find_if(c.begin(), c.end(), [tol](double x) { return std::abs(x) > tol; });
    if (first == c.end()) return {0.0};
    c.erase(c.begin(), first);
    return c;
}

Coefficients poly_multiply(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) return {0.0};
    Coefficients out(a.size() + b.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    }
    return out;
}

Coefficients poly_pad(std::span<const double> a, std::size_t size) {
    Coefficients out(size > a.size() ? size - a.size() : 0, 0.0);
    out.insert(out.end(), a.begin(), a.end());
    return out;
}

Coefficients poly_add(std::span<const double> a, std::span<const double> b) {
    const std::size_t n = std::max(a.size(), b.size());
    Coefficients pa = poly_pad(a, n);
    const Coefficients pb = poly_pad(b, n);
    for (std::size_t i = 0; i < n; ++i) pa[i] += pb[i];
    return pa;
}

Coefficients poly_scale(std::span<const double> a, double k) {
    Coefficients out(a.begin(), a.end());
    for (double& x : out) x *= k;
    return out;
}

bool poly_is_zero(std::span<const double> a) {
    return std::all_of(a.begin(), a.end(), [](double x) { return x == 0.0; });
}

Complex poly_eval(std::span<const double> c, Complex s) {
    Complex acc{0.0, 0.0};
    for (double x : c) acc = acc * s + x;
    return acc;
}

double poly_eval(std::span<const double> c, double s) {
    double acc = 0.0;
    for (double x : c) acc = acc * s + x;
    return acc;
}

Coefficients poly_from_roots(std::span<const Complex> rts) {
    std::vector<Complex> acc{Complex{1.0, 0.0}};
    for (const Complex& r : rts) {
        std::vector<Complex> next(acc.size() + 1, Complex{0.0, 0.0});
        for (std::size_t i = 0; i < acc.size(); ++i) {
            next[i] += acc[i];
            next[i + 1] -= acc[i] * r;
        }
        acc = std::move(next);
    }
    Coefficients out(acc.size());
    std::transform(acc.begin(), acc.end(), out.begin(), [](Complex z) { return z.real(); });
    return out;
}

void sort_complex(std::vector<Complex>& values) {
    std::sort(values.begin(), values.end(), [](Complex a, Complex b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
}

std::vector<Complex> eigenvalues(const Eigen::MatrixXd& a) {
    std::vector<Complex> out;
    if (a.rows() == 0) return out;
    Eigen::EigenSolver<Eigen::MatrixXd> solver;
    solver.setMaxIterations(static_cast<Eigen::Index>(100 * a.rows()));
    solver.compute(a, /*computeEigenvectors=*/false);
    const auto& ev = solver.eigenvalues();
    out.reserve(static_cast<std::size_t>(ev.size()));
    for (Eigen::Index i = 0; i < ev.size(); ++i) out.push_back(ev(i));
    sort_complex(out);
    return out;
}

std::vector<Complex> roots(std::span<const double> c) {
    Coefficients p = strip_leading_zeros(Coefficients(c.begin(), c.end()));
    std::vector<Complex> out;
    if (p.size() <= 1) return out;

    while (p.size() > 1 && p.back() == 0.0) {
        out.emplace_back(0.0, 0.0);
        p.pop_back();
    }
    const std::size_t n = p.size() - 1;
    if (n == 1) {
        out.emplace_back(-p[1] / p[0], 0.0);
    } else if (n > 1) {
        Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
        for (std::size_t j = 0; j < n; ++j) companion(0, static_cast<Eigen::Index>(j)) = -p[j + 1] / p[0];
        for (std::size_t i = 1; i < n; ++i) companion(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i - 1)) = 1.0;
        balance(companion);
        auto ev = eigenvalues(companion);
        out.insert(out.end(), ev.begin(), ev.end());
    }
    sort_complex(out);
    return out;
}

int routh_rhp_count(std::span<const double> c) {
    Coefficients p = strip_leading_zeros(Coefficients(c.begin(), c.end()));
    while (p.size() > 1 && p.back() == 0.0) p.pop_back();  // roots at the origin
    if (p.size() <= 1) return 0;
    if (p[0] < 0.0) p = poly_scale(p, -1.0);

    const std::size_t n = p.size() - 1;
    const std::size_t width = n / 2 + 1;
    const double scale = max_abs(p);
    const double zero_tol = 1e-12 * scale;
    const double eps = 1e-10 * scale;

    std::vector<std::vector<double>> rows(n + 1, std::vector<double>(width + 1, 0.0));
    for (std::size_t j = 0; j < width; ++j) {
        if (2 * j < p.size()) rows[0][j] = p[2 * j];
        if (2 * j + 1 < p.size()) rows[1][j] = p[2 * j + 1];
    }

    auto row_is_zero = [&](const std::vector<double>& r) {
        return std::all_of(r.begin(), r.end(), [&](double x) { return std::abs(x) <= zero_tol; });
    };

    for (std::size_t i = 1; i <= n; ++i) {
        if (row_is_zero(rows[i])) {
            // Auxiliary polynomial from the row above has order n - (i - 1).
            const double order = static_cast<double>(n - (i - 1));
            for (std::size_t j = 0; j < width; ++j) rows[i][j] = rows[i - 1][j] * (order - 2.0 * static_cast<double>(j));
        }
        if (std::abs(rows[i][0]) <= zero_tol) rows[i][0] = eps;
        if (i == n) break;
        for (std::size_t j = 0; j < width; ++j) {
            rows[i + 1][j] = (rows[i][0] * rows[i - 1][j + 1] - rows[i - 1][0] * rows[i][j + 1]) / rows[i][0];
        }
    }

    int changes = 0;
    for (std::size_t i = 1; i <= n; ++i) {
        if ((rows[i - 1][0] > 0.0) != (rows[i][0] > 0.0)) ++changes;
    }
    return changes;
}

}  // namespace agentctl::control
