#include "agentctl/control/response.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <unsupported/Eigen/MatrixFunctions>

#include "agentctl/control/analysis.hpp"
#include "agentctl/error.hpp"

namespace agentctl::control {

namespace {

std::vector<double> logspace(double lo_exp, double hi_exp, std::size_t n) {
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double f = n == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(n - 1);
        out[i] = std::pow(10.0, lo_exp + f * (hi_exp - lo_exp));
    }
    return out;
}

StateSpace siso_ss(const LinearSystem& sys) {
    StateSpace ss = as_ss(sys);
    if (!ss.is_siso()) throw Error(ErrorCode::UnsupportedShape, "responses are computed for SISO systems only");
    return ss;
}

}  // namespace

std::string_view to_string(TimeResponseKind kind) noexcept {
    switch (kind) {
        case TimeResponseKind::Step: return "step";
        case TimeResponseKind::Impulse: return "impulse";
        case TimeResponseKind::Forced: return "forced";
    }
    return "step";
}

std::string_view to_string(FrequencyKind kind) noexcept {
    return kind == FrequencyKind::Nyquist ? "nyquist" : "bode";
}

double default_horizon(const LinearSystem& sys) {
    const auto p = poles(sys);
    if (p.empty()) return 1.0;
    double slowest = -std::numeric_limits<double>::infinity();
    for (const Complex& z : p) slowest = std::max(slowest, z.real());
    if (slowest >= -kAxisTolerance) return 5.0;
    return std::clamp(8.0 / std::abs(slowest), 1.0, 100.0);
}

TimeResponseData time_response(const LinearSystem& sys, TimeResponseKind kind, const TimeResponseOptions& options) {
    const StateSpace ss = siso_ss(sys);
    if (kind == TimeResponseKind::Forced && options.u.empty()) {
        throw Error(ErrorCode::BadGrid, "forced response needs input samples");
    }
    const std::size_t n_points = kind == TimeResponseKind::Forced ? options.u.size()
                                                                   : options.n_points.value_or(kDefaultTimePoints);
    if (n_points < 2) throw Error(ErrorCode::BadGrid, "time grid needs at least two points");
    const double horizon = options.horizon.value_or(default_horizon(sys));
    if (!(horizon > 0.0) || !std::isfinite(horizon)) {
        throw Error(ErrorCode::BadGrid, "horizon must be positive, got " + std::to_string(horizon));
    }
    if (kind == TimeResponseKind::Forced &&
        !std::all_of(options.u.begin(), options.u.end(), [](double x) { return std::isfinite(x); })) {
        throw Error(ErrorCode::BadGrid, "input samples must be finite");
    }

    TimeResponseData out;
    out.kind = kind;
    out.t.resize(n_points);
    out.y.resize(n_points);
    const double dt = horizon / static_cast<double>(n_points - 1);
    for (std::size_t i = 0; i < n_points; ++i) out.t[i] = dt * static_cast<double>(i);
    out.t.back() = horizon;

    switch (kind) {
        case TimeResponseKind::Step: out.u.assign(n_points, 1.0); break;
        case TimeResponseKind::Impulse: out.u.assign(n_points, 0.0); break;
        case TimeResponseKind::Forced: out.u = options.u; break;
    }

    const Eigen::Index n = ss.states();
    const double d = ss.D()(0, 0);
    if (n == 0) {
        for (std::size_t i = 0; i < n_points; ++i) out.y[i] = d * out.u[i];
        return out;
    }

    Matrix aug = Matrix::Zero(n + 1, n + 1);
    aug.topLeftCorner(n, n) = ss.A() * dt;
    aug.topRightCorner(n, 1) = ss.B() * dt;
    const Matrix phi = aug.exp();
    const Matrix ad = phi.topLeftCorner(n, n);
    const Eigen::VectorXd bd = phi.topRightCorner(n, 1);
    const Eigen::RowVectorXd c = ss.C().row(0);

    Eigen::VectorXd x = kind == TimeResponseKind::Impulse ? Eigen::VectorXd(ss.B().col(0)) : Eigen::VectorXd::Zero(n);
    for (std::size_t i = 0; i < n_points; ++i) {
        out.y[i] = c.dot(x) + d * out.u[i];
        x = ad * x + bd * out.u[i];
    }
    return out;
}

FrequencyResponseData frequency_response(const LinearSystem& sys, FrequencyKind kind, const FrequencyOptions& options) {
    if (const auto* ss = std::get_if<StateSpace>(&sys); ss && !ss->is_siso()) {
        throw Error(ErrorCode::UnsupportedShape, "frequency responses are computed for SISO systems only");
    }
    if (options.n_points < 2) throw Error(ErrorCode::BadGrid, "frequency grid needs at least two points");

    FrequencyResponseData out;
    out.kind = kind;
    if (options.decades) {
        const auto [lo, hi] = *options.decades;
        if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) {
            throw Error(ErrorCode::BadGrid, "frequency decades must satisfy lo < hi");
        }
        out.omega = logspace(lo, hi, options.n_points);
    } else {
        double scale = 0.0;
        for (const Complex& z : poles(sys)) scale = std::max(scale, std::abs(z));
        for (const Complex& z : zeros(sys)) scale = std::max(scale, std::abs(z));
        if (scale <= 0.0) scale = 1.0;
        const double base = std::log10(scale);
        out.omega = logspace(base - 2.0, base + 2.0, options.n_points);
    }

    out.response.resize(out.omega.size());
    if (const auto* tf = std::get_if<TransferFunction>(&sys)) {
        for (std::size_t i = 0; i < out.omega.size(); ++i) out.response[i] = tf->evaluate(Complex{0.0, out.omega[i]});
    } else {
        const StateSpace& ss = std::get<StateSpace>(sys);
        const Eigen::Index n = ss.states();
        const Eigen::MatrixXcd a = ss.A().cast<Complex>();
        const Eigen::VectorXcd b = ss.B().col(0).cast<Complex>();
        const Eigen::RowVectorXcd c = ss.C().row(0).cast<Complex>();
        const Complex d = ss.D()(0, 0);
        for (std::size_t i = 0; i < out.omega.size(); ++i) {
            if (n == 0) {
                out.response[i] = d;
                continue;
            }
            const Eigen::MatrixXcd m = Complex{0.0, out.omega[i]} * Eigen::MatrixXcd::Identity(n, n) - a;
            Eigen::FullPivLU<Eigen::MatrixXcd> lu(m);
            if (!lu.isInvertible()) {
                const double inf = std::numeric_limits<double>::infinity();
                out.response[i] = Complex{inf, inf};
                continue;
            }
            const Eigen::VectorXcd x = lu.solve(b);
            out.response[i] = (c * x)(0) + d;
        }
    }
    for (std::size_t i = 0; i < out.response.size(); ++i) {
        if (!std::isfinite(out.response[i].real()) || !std::isfinite(out.response[i].imag())) out.nonfinite.push_back(i);
    }
    return out;
}

std::vector<double> magnitude_db(const FrequencyResponseData& data) {
    std::vector<double> out(data.response.size());
    std::transform(data.response.begin(), data.response.end(), out.begin(),
                   [](Complex z) { return 20.0 * std::log10(std::abs(z)); });
    return out;
}

std::vector<double> phase_deg(const FrequencyResponseData& data) {
    std::vector<double> out(data.response.size());
    double offset = 0.0;
    double prev = 0.0;
    for (std::size_t i = 0; i < data.response.size(); ++i) {
        const double raw = std::arg(data.response[i]) * 180.0 / std::numbers::pi;
        if (i > 0 && std::isfinite(raw) && std::isfinite(prev)) {
            const double jump = raw + offset - prev;
            if (jump > 180.0) offset -= 360.0 * std::ceil((jump - 180.0) / 360.0);
            if (jump < -180.0) offset += 360.0 * std::ceil((-jump - 180.0) / 360.0);
        }
        out[i] = raw + offset;
        if (std::isfinite(out[i])) prev = out[i];
    }
    return out;
}

RootLocusData root_locus_data(const LinearSystem& sys, std::optional<std::vector<double>> gains) {
    const TransferFunction tf = as_tf(sys);
    RootLocusData out;
    if (gains) {
        for (double k : *gains) {
            if (!(k >= 0.0) || !std::isfinite(k)) throw Error(ErrorCode::BadGrid, "root locus gains must be finite and nonnegative");
        }
        out.gains = std::move(*gains);
        if (out.gains.empty() || out.gains.front() != 0.0) out.gains.insert(out.gains.begin(), 0.0);
    } else {
        out.gains.push_back(0.0);
        const auto grid = logspace(-3.0, 3.0, 100);
        out.gains.insert(out.gains.end(), grid.begin(), grid.end());
    }
    out.branches.reserve(out.gains.size());
    for (double k : out.gains) out.branches.push_back(roots(poly_add(tf.den(), poly_scale(tf.num(), k))));
    return out;
}

}  // namespace agentctl::control
