#include "agentctl/control/format.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace agentctl::control {

namespace {

std::string trim_number(std::string s) {
    if (s.find('.') != std::string::npos) {
        while (!s.empty() && s.back() == '0') s.pop_back();
        if (!s.empty() && s.back() == '.') s.pop_back();
    }
    if (s == "-0") s = "0";
    return s;
}

std::string format_g4(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", x);
    return buf;
}

std::string centered(const std::string& s, std::size_t width) {
    const std::size_t pad = width > s.size() ? (width - s.size()) / 2 : 0;
    return std::string(pad, ' ') + s;
}

}  // namespace

std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2f", x);
    return trim_number(buf);
}

std::string format_complex(Complex z) {
    const std::string im = format_number(std::abs(z.imag()));
    if (im == "0") return format_number(z.real());
    const std::string re = format_number(z.real());
    const char* sign = z.imag() < 0 ? "-" : "+";
    if (re == "0") return (z.imag() < 0 ? "-" : "") + im + "j";
    return re + sign + im + "j";
}

std::string format_vector(std::span<const double> v) {
    std::string out = "[";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ", ";
        out += format_number(v[i]);
    }
    return out + "]";
}

std::string format_complex_list(std::span<const Complex> v) {
    std::string out = "[";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ", ";
        out += format_complex(v[i]);
    }
    return out + "]";
}

std::string format_matrix(const Matrix& m) {
    std::string out = "[";
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        if (i) out += ", ";
        out += "[";
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (j) out += ", ";
            out += format_number(m(i, j));
        }
        out += "]";
    }
    return out + "]";
}

std::string format_polynomial(std::span<const double> c) {
    std::string out;
    const std::size_t deg = c.empty() ? 0 : c.size() - 1;
    for (std::size_t i = 0; i < c.size(); ++i) {
        const double x = c[i];
        if (x == 0.0) continue;
        const std::size_t p = deg - i;
        std::string coef = format_g4(std::abs(x));
        std::string term;
        if (p == 0) {
            term = coef;
        } else {
            term = coef == "1" ? "" : coef + " ";
            term += p == 1 ? "s" : "s^" + std::to_string(p);
        }
        if (out.empty()) {
            out = (x < 0 ? "-" : "") + term;
        } else {
            out += (x < 0 ? " - " : " + ") + term;
        }
    }
    return out.empty() ? "0" : out;
}

std::string format_tf(const TransferFunction& tf) {
    const std::string num = format_polynomial(tf.num());
    const std::string den = format_polynomial(tf.den());
    const std::size_t width = std::max(num.size(), den.size());
    return centered(num, width) + "\n" + std::string(width, '-') + "\n" + centered(den, width);
}

std::string format_ss(const StateSpace& ss) {
    std::ostringstream os;
    os << "A = " << format_matrix(ss.A()) << "\n"
       << "B = " << format_matrix(ss.B()) << "\n"
       << "C = " << format_matrix(ss.C()) << "\n"
       << "D = " << format_matrix(ss.D());
    return os.str();
}

}  // namespace agentctl::control
