#include "agentctl/agents/toolbox.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

#include "agentctl/control/analysis.hpp"
#include "agentctl/control/design.hpp"
#include "agentctl/control/format.hpp"
#include "agentctl/control/response.hpp"
#include "agentctl/error.hpp"

namespace agentctl::agents {

namespace {

using control::Complex;
using control::LinearSystem;
using control::Matrix;

[[noreturn]] void bad_args(std::string_view tool, const std::string& what) {
    throw Error(ErrorCode::ArgParseError, std::string(tool) + ": " + what);
}

std::string g4(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

struct Args {
    std::string_view tool;
    const ArgMap& map;

    const ArgValue* find(std::initializer_list<const char*> names) const {
        for (const char* n : names) {
            if (auto it = map.find(n); it != map.end()) return &it->second;
        }
        return nullptr;
    }
    const ArgValue& require(std::initializer_list<const char*> names) const {
        if (auto* v = find(names)) return *v;
        bad_args(tool, std::string("missing argument '") + *names.begin() + "'");
    }
    bool has(std::initializer_list<const char*> names) const { return find(names) != nullptr; }

    Matrix matrix(std::initializer_list<const char*> names) const {
        const ArgValue& v = require(names);
        if (v.kind == ArgValue::Kind::String) {
            bad_args(tool, std::string("argument '") + *names.begin() + "' must be a matrix, got '" + v.text + "'");
        }
        try {
            return v.as_matrix();
        } catch (const Error& e) {
            bad_args(tool, std::string("argument '") + *names.begin() + "': " + e.detail());
        }
    }

    control::Coefficients coefficients(std::initializer_list<const char*> names) const {
        const ArgValue& v = require(names);
        if (v.kind == ArgValue::Kind::Number) return {v.number};
        if (v.kind == ArgValue::Kind::Matrix && v.matrix.rows() == 1) {
            return control::Coefficients(v.matrix.data(), v.matrix.data() + v.matrix.cols());
        }
        if (!v.is_real_list()) bad_args(tool, std::string("argument '") + *names.begin() + "' must be a real list");
        control::Coefficients c;
        for (const auto& z : v.list) c.push_back(z.real());
        return c;
    }

    std::vector<Complex> complex_list(std::initializer_list<const char*> names) const {
        const ArgValue& v = require(names);
        switch (v.kind) {
            case ArgValue::Kind::List: return v.list;
            case ArgValue::Kind::Number: return {Complex(v.number, 0.0)};
            case ArgValue::Kind::Matrix:
                if (v.matrix.rows() == 1 || v.matrix.cols() == 1) {
                    std::vector<Complex> out;
                    for (Eigen::Index i = 0; i < v.matrix.size(); ++i) out.emplace_back(v.matrix.data()[i], 0.0);
                    return out;
                }
                break;
            case ArgValue::Kind::String: break;
        }
        bad_args(tool, std::string("argument '") + *names.begin() + "' must be a list of poles");
    }

    std::optional<double> number(std::initializer_list<const char*> names) const {
        const ArgValue* v = find(names);
        if (!v) return std::nullopt;
        if (v->kind != ArgValue::Kind::Number) bad_args(tool, std::string("argument '") + *names.begin() + "' must be a number");
        return v->number;
    }

    std::string text(std::initializer_list<const char*> names) const {
        const ArgValue& v = require(names);
        if (v.kind != ArgValue::Kind::String) bad_args(tool, std::string("argument '") + *names.begin() + "' must be a handle");
        return v.text;
    }

    void only(std::initializer_list<const char*> allowed) const {
        const std::set<std::string> ok(allowed.begin(), allowed.end());
        for (const auto& [name, value] : map) {
            if (!ok.count(name)) bad_args(tool, "unexpected argument '" + name + "'");
        }
    }
};

// A system given as a handle, num/den or A/B/C/D. The suffix selects the
// second operand of series/parallel/feedback ("2").
struct Resolved {
    LinearSystem sys;
    std::string name;
};

Resolved system_arg(const Args& a, const SystemRegistry& reg, const std::string& suffix = "") {
    auto key = [&](const char* base) { return std::string(base) + suffix; };
    const std::string sys_key = key("sys"), num_key = key("num"), den_key = key("den");
    if (auto it = a.map.find(sys_key); it != a.map.end()) {
        if (it->second.kind != ArgValue::Kind::String) bad_args(a.tool, "argument '" + sys_key + "' must be a handle");
        const std::string handle = SystemRegistry::handle_name(SystemRegistry::parse_handle(it->second.text));
        return {reg.get(it->second.text), handle};
    }
    if (a.map.count(num_key) || a.map.count(den_key)) {
        const auto num = Args{a.tool, a.map}.coefficients({num_key.c_str()});
        const auto den = Args{a.tool, a.map}.coefficients({den_key.c_str()});
        return {control::make_tf(num, den), "the system"};
    }
    if (suffix.empty() && a.has({"A"})) {
        return {control::make_ss(a.matrix({"A"}), a.matrix({"B"}), a.matrix({"C"}), a.matrix({"D"})), "the system"};
    }
    bad_args(a.tool, "expected '" + sys_key + "', '" + num_key + "'/'" + den_key + "'" +
                         (suffix.empty() ? " or 'A'/'B'/'C'/'D'" : ""));
}

std::pair<Matrix, Matrix> ab_arg(const Args& a, const SystemRegistry& reg) {
    if (a.has({"sys"})) {
        const auto ss = control::as_ss(system_arg(a, reg).sys);
        return {ss.A(), ss.B()};
    }
    return {a.matrix({"A"}), a.matrix({"B"})};
}

std::string io_header(const std::string& handle, const LinearSystem& sys) {
    auto names = [](const char* stem, Eigen::Index n) {
        std::string out = "[";
        for (Eigen::Index i = 0; i < n; ++i) {
            if (i) out += ", ";
            out += "'" + std::string(stem) + " [" + std::to_string(i) + "]'";
        }
        return out + "]";
    };
    Eigen::Index m = 1, p = 1;
    if (auto* ss = std::get_if<control::StateSpace>(&sys)) {
        m = ss->inputs();
        p = ss->outputs();
    }
    std::string out = handle + "\nInputs (" + std::to_string(m) + "): " + names("u", m) + "\nOutputs (" +
                      std::to_string(p) + "): " + names("y", p) + "\n";
    if (auto* ss = std::get_if<control::StateSpace>(&sys)) {
        out += "States (" + std::to_string(ss->states()) + "): " + names("x", ss->states()) + "\n";
    }
    return out;
}

ToolResult store(SystemRegistry& reg, LinearSystem sys) {
    const std::string handle = reg.add(sys);
    std::string body = std::holds_alternative<control::TransferFunction>(sys)
                           ? control::format_tf(std::get<control::TransferFunction>(sys))
                           : control::format_ss(std::get<control::StateSpace>(sys));
    return {io_header(handle, sys) + "\n" + body, std::nullopt, handle};
}

std::string gain_text(const Matrix& k) { return "K = " + control::format_matrix(k); }

ToolResult time_tool(const Args& a, SystemRegistry& reg, control::TimeResponseKind kind) {
    if (kind == control::TimeResponseKind::Forced) {
        a.only({"sys", "num", "den", "A", "B", "C", "D", "u", "T"});
    } else {
        a.only({"sys", "num", "den", "A", "B", "C", "D", "T"});
    }
    const Resolved r = system_arg(a, reg);
    control::TimeResponseOptions opt;
    opt.horizon = a.number({"T"});
    if (kind == control::TimeResponseKind::Forced) {
        for (const auto& z : a.complex_list({"u"})) opt.u.push_back(z.real());
    }
    const auto data = control::time_response(r.sys, kind, opt);
    const std::string what = std::string(control::to_string(kind)) + " response";
    std::size_t peak = 0;
    for (std::size_t i = 1; i < data.y.size(); ++i) {
        if (data.y[i] > data.y[peak]) peak = i;
    }
    std::string obs = "<TimeResponseData> " + what + " of " + r.name + ": " + std::to_string(data.t.size()) +
                      " samples over [0, " + g4(data.t.back()) + "] s, final value " + g4(data.y.back()) + ", peak " +
                      g4(data.y[peak]) + " at t = " + g4(data.t[peak]) + " s";
    return {obs, time_response_plot(data, what + " of " + r.name), std::nullopt};
}

control::FrequencyOptions freq_options(const Args& a) {
    control::FrequencyOptions opt;
    if (const ArgValue* v = a.find({"decades"})) {
        if (!v->is_real_list() || v->list.size() != 2 || !(v->list[0].real() < v->list[1].real())) {
            bad_args(a.tool, "argument 'decades' must be [low, high] exponents");
        }
        opt.decades = std::make_pair(v->list[0].real(), v->list[1].real());
    }
    return opt;
}

std::vector<ToolSpec> build_tools() {
    std::vector<ToolSpec> t;
    t.push_back({"tf", "representation", "num = [..], den = [..]", "Create a transfer function system.",
                 [](const ArgMap& m, SystemRegistry& reg) {
                     Args a{"tf", m};
                     a.only({"num", "den"});
                     return store(reg, control::make_tf(a.coefficients({"num"}), a.coefficients({"den"})));
                 }});
    t.push_back({"ss", "representation", "A = [[..]], B = [[..]], C = [[..]], D = [[..]]",
                 "Create a state-space system.", [](const ArgMap& m, SystemRegistry& reg) {
                     Args a{"ss", m};
                     a.only({"A", "B", "C", "D"});
                     return store(reg, control::make_ss(a.matrix({"A"}), a.matrix({"B"}), a.matrix({"C"}),
                                                        a.matrix({"D"})));
                 }});
    t.push_back({"tf2ss", "representation", "sys = <handle> | num, den",
                 "Convert a transfer function to controllable canonical state space.",
                 [](const ArgMap& m, SystemRegistry& reg) {
                     Args a{"tf2ss", m};
                     a.only({"sys", "num", "den"});
                     return store(reg, control::tf_to_ss(control::as_tf(system_arg(a, reg).sys)));
                 }});
    t.push_back({"ss2tf", "representation", "sys = <handle> | A, B, C, D",
                 "Convert a SISO state-space system to a transfer function.",
                 [](const ArgMap& m, SystemRegistry& reg) {
                     Args a{"ss2tf", m};
                     a.only({"sys", "A", "B", "C", "D"});
                     return store(reg, control::ss_to_tf(control::as_ss(system_arg(a, reg).sys)));
                 }});
    auto interconnect = [](const char* id, control::Interconnection kind) {
        return [id, kind](const ArgMap& m, SystemRegistry& reg) {
            Args a{id, m};
            const bool feedback = kind == control::Interconnection::Feedback;
            std::optional<control::TransferFunction> g2;
            control::TransferFunction g1 = control::make_tf({1}, {1});
            if (a.has({"sys1"}) || a.has({"num1"})) {
                a.only({"sys1", "num1", "den1", "sys2", "num2", "den2"});
                g1 = control::as_tf(system_arg(a, reg, "1").sys);
            } else {
                a.only({"sys", "num", "den", "A", "B", "C", "D", "sys2", "num2", "den2"});
                g1 = control::as_tf(system_arg(a, reg).sys);
            }
            if (a.has({"sys2"}) || a.has({"num2"})) {
                g2 = control::as_tf(system_arg(a, reg, "2").sys);
            } else if (!feedback) {
                bad_args(id, "missing argument 'sys2'");
            }
            return store(reg, control::interconnect(kind, g1, g2));
        };
    };
    t.push_back({"feedback", "representation", "sys = <handle> [, sys2 = <handle>]",
                 "Negative feedback loop, unity when sys2 is omitted.",
                 interconnect("feedback", control::Interconnection::Feedback)});
    t.push_back({"series", "representation", "sys1 = <handle>, sys2 = <handle>", "Series connection sys2·sys1.",
                 interconnect("series", control::Interconnection::Series)});
    t.push_back({"parallel", "representation", "sys1 = <handle>, sys2 = <handle>", "Parallel connection sys1 + sys2.",
                 interconnect("parallel", control::Interconnection::Parallel)});

    t.push_back({"poles", "analysis", "sys = <handle> | num, den | A, B, C, D", "Poles of the system.",
                 [](const ArgMap& m, SystemRegistry& reg) {
                     Args a{"poles", m};
                     a.only({"sys", "num", "den", "A", "B", "C", "D"});
                     const Resolved r = system_arg(a, reg);
                     const auto p = control::poles(r.sys);
                     return ToolResult{"Poles of " + r.name + ": " + control::format_complex_list(p), {}, {}};
                 }});
    t.push_back({"zeros", "analysis", "sys = <handle> | num, den | A, B, C, D", "Transmission zeros of a SISO system.",
                 [](const ArgMap& m, SystemRegistry& reg) {
                     Args a{"zeros", m};
                     a.only({"sys", "num", "den", "A", "B", "C", "D"});
                     const Resolved r = system_arg(a, reg);
                     const auto z = control::zeros(r.sys);
                     return ToolResult{"Zeros of " + r.name + ": " + control::format_complex_list(z), {}, {}};
                 }});
    t.push_back({"dcgain", "analysis", "sys = <handle> | num, den | A, B, C, D", "Steady-state gain G(0).",
                 [](const ArgMap& m, SystemRegistry& reg) {
                     Args a{"dcgain", m};
                     a.only({"sys", "num", "den", "A", "B", "C", "D"});
                     const Resolved r = system_arg(a, reg);
                     const auto g = control::dc_gain(r.sys);
                     if (g.infinite) return ToolResult{"DC gain of " + r.name + " is infinite (pole at s = 0)", {}, {}};
                     return ToolResult{"DC gain of " + r.name + " = " + g4(g.value), {}, {}};
                 }});
    t.push_back({"is_stable", "analysis", "sys = <handle> | num, den | A, B, C, D",
                 "Stability check from the poles, with a Routh count for transfer functions.",
                 [](const ArgMap& m, SystemRegistry& reg) {
                     Args a{"is_stable", m};
                     a.only({"sys", "num", "den", "A", "B", "C", "D"});
                     const Resolved r = system_arg(a, reg);
                     const auto rep = control::is_stable(r.sys);
                     std::string obs = r.name + " is " + (rep.is_stable ? "stable" : "unstable") + ": " +
                                       std::to_string(rep.rhp_pole_count) + " pole(s) in the right half-plane";
                     if (rep.marginal) obs += ", pole(s) on the imaginary axis";
                     if (rep.routh_rhp_count) obs += ", Routh count " + std::to_string(*rep.routh_rhp_count);
                     obs += ". Poles: " + control::format_complex_list(rep.poles);
                     return ToolResult{obs, {}, {}};
                 }});
    t.push_back({"ctrb", "analysis", "A = [[..]], B = [[..]] | sys = <handle>", "Controllability matrix and its rank.",
                 [](const ArgMap& m, SystemRegistry& reg) {
                     Args a{"ctrb", m};
                     a.only({"sys", "A", "B"});
                     const auto [A, B] = ab_arg(a, reg);
                     const auto c = control::controllability_matrix(A, B);
                     const bool full = c.rank == A.rows();
                     return ToolResult{"Controllability matrix = " + control::format_matrix(c.matrix) + "\nrank = " +
                                           std::to_string(c.rank) + " of " + std::to_string(A.rows()) +
                                           (full ? " (controllable)" : " (not controllable)"),
                                       {},
                                       {}};
                 }});
    t.push_back({"pzmap", "analysis", "sys = <handle> | num, den | A, B, C, D", "Pole-zero map.",
                 [](const ArgMap& m, SystemRegistry& reg) {
                     Args a{"pzmap", m};
                     a.only({"sys", "num", "den", "A", "B", "C", "D"});
                     const Resolved r = system_arg(a, reg);
                     const auto p = control::poles(r.sys);
                     const auto z = control::zeros(r.sys);
                     return ToolResult{"<PoleZeroData> poles " + control::format_complex_list(p) + ", zeros " +
                                           control::format_complex_list(z),
                                       pzmap_plot(p, z, "pole-zero map of " + r.name),
                                       {}};
                 }});
    t.push_back({"bode", "analysis", "sys = <handle> [, decades = [lo, hi]]", "Bode magnitude and phase.",
                 [](const ArgMap& m, SystemRegistry& reg) {
                     Args a{"bode", m};
                     a.only({"sys", "num", "den", "A", "B", "C", "D", "decades"});
                     const Resolved r = system_arg(a, reg);
                     const auto d = control::frequency_response(r.sys, control::FrequencyKind::Bode, freq_options(a));
                     const auto mag = control::magnitude_db(d);
                     return ToolResult{"<FrequencyResponseData> bode of " + r.name + ": " +
                                           std::to_string(d.omega.size()) + " points over [" + g4(d.omega.front()) +
                                           ", " + g4(d.omega.back()) + "] rad/s, magnitude " + g4(mag.front()) +
                                           " dB at the lowest frequency",
                                       bode_plot(d, "bode plot of " + r.name),
                                       {}};
                 }});
    t.push_back({"nyquist", "analysis", "sys = <handle> [, decades = [lo, hi]]", "Nyquist curve.",
                 [](const ArgMap& m, SystemRegistry& reg) {
                     Args a{"nyquist", m};
                     a.only({"sys", "num", "den", "A", "B", "C", "D", "decades"});
                     const Resolved r = system_arg(a, reg);
                     const auto d =
                         control::frequency_response(r.sys, control::FrequencyKind::Nyquist, freq_options(a));
                     return ToolResult{"<FrequencyResponseData> nyquist of " + r.name + ": " +
                                           std::to_string(d.omega.size()) + " points",
                                       nyquist_plot(d, "nyquist plot of " + r.name),
                                       {}};
                 }});
    t.push_back({"root_locus", "analysis", "sys = <handle> [, gains = [..]]", "Closed-loop poles over a gain sweep.",
                 [](const ArgMap& m, SystemRegistry& reg) {
                     Args a{"root_locus", m};
                     a.only({"sys", "num", "den", "A", "B", "C", "D", "gains"});
                     const Resolved r = system_arg(a, reg);
                     std::optional<std::vector<double>> gains;
                     if (a.has({"gains"})) {
                         gains.emplace();
                         for (const auto& z : a.complex_list({"gains"})) gains->push_back(z.real());
                     }
                     const auto d = control::root_locus_data(r.sys, gains);
                     return ToolResult{"<RootLocusData> root locus of " + r.name + ": " + std::to_string(d.gains.size()) +
                                           " gains, " + std::to_string(d.branches.front().size()) + " branches",
                                       root_locus_plot(d, "root locus of " + r.name),
                                       {}};
                 }});

    auto placement = [](const char* id, bool ackermann) {
        return [id, ackermann](const ArgMap& m, SystemRegistry& reg) {
            Args a{id, m};
            a.only({"sys", "A", "B", "poles", "p"});
            const auto [A, B] = ab_arg(a, reg);
            const auto desired = a.complex_list({"poles", "p"});
            const Matrix k = ackermann ? control::acker(A, B, desired) : control::place(A, B, desired);
            const auto cl = control::eigenvalues(A - B * k);
            return ToolResult{gain_text(k) + "\nClosed-loop poles: " + control::format_complex_list(cl), {}, {}};
        };
    };
    t.push_back({"place", "design", "A = [[..]], B = [[..]], poles = [..]", "State-feedback pole placement.",
                 placement("place", false)});
    t.push_back({"acker", "design", "A = [[..]], B = [[..]], poles = [..]", "Pole placement by Ackermann's formula.",
                 placement("acker", true)});
    t.push_back({"lqr", "design", "A = [[..]], B = [[..]], Q = [[..]], R = [[..]]",
                 "Linear-quadratic regulator: gain K, Riccati solution S, closed-loop eigenvalues E.",
                 [](const ArgMap& m, SystemRegistry& reg) {
                     Args a{"lqr", m};
                     a.only({"sys", "A", "B", "Q", "R"});
                     const auto [A, B] = ab_arg(a, reg);
                     const auto sol = control::lqr(A, B, a.matrix({"Q"}), a.matrix({"R"}));
                     return ToolResult{gain_text(sol.K) + "\nS = " + control::format_matrix(sol.S) +
                                           "\nE = " + control::format_complex_list(sol.E),
                                       {},
                                       {}};
                 }});
    t.push_back({"lyap", "design", "A = [[..]], Q = [[..]]", "Solves A^T X + X A = -Q.",
                 [](const ArgMap& m, SystemRegistry&) {
                     Args a{"lyap", m};
                     a.only({"A", "Q"});
                     return ToolResult{"X = " + control::format_matrix(control::solve_lyapunov(a.matrix({"A"}), a.matrix({"Q"}))),
                                       {},
                                       {}};
                 }});
    t.push_back({"state_feedback", "design", "sys = <handle> | A, B, C, D, K = [[..]]",
                 "Closed loop (A - BK, B, C, D) under state feedback.", [](const ArgMap& m, SystemRegistry& reg) {
                     Args a{"state_feedback", m};
                     a.only({"sys", "A", "B", "C", "D", "K"});
                     const auto ss = control::as_ss(system_arg(a, reg).sys);
                     return store(reg, control::closed_loop_state_feedback(ss, a.matrix({"K"})));
                 }});

    t.push_back({"step_response", "simulation", "sys = <handle> [, T = horizon]", "Unit step response.",
                 [](const ArgMap& m, SystemRegistry& reg) {
                     return time_tool(Args{"step_response", m}, reg, control::TimeResponseKind::Step);
                 }});
    t.push_back({"impulse_response", "simulation", "sys = <handle> [, T = horizon]", "Unit impulse response.",
                 [](const ArgMap& m, SystemRegistry& reg) {
                     return time_tool(Args{"impulse_response", m}, reg, control::TimeResponseKind::Impulse);
                 }});
    t.push_back({"forced_response", "simulation", "sys = <handle>, u = [..] [, T = horizon]",
                 "Response to an input sampled on a uniform grid.", [](const ArgMap& m, SystemRegistry& reg) {
                     return time_tool(Args{"forced_response", m}, reg, control::TimeResponseKind::Forced);
                 }});
    return t;
}

}  // namespace

const std::vector<ToolSpec>& control_tools() {
    static const std::vector<ToolSpec> tools = build_tools();
    return tools;
}

std::string canonical_tool_id(std::string_view name) {
    auto b = name.find_first_not_of(" \t\r\n'\"`");
    auto e = name.find_last_not_of(" \t\r\n'\"`.");
    if (b == std::string_view::npos) return {};
    name = name.substr(b, e - b + 1);
    if (name.starts_with("control.")) name.remove_prefix(8);
    return std::string(name);
}

const ToolSpec* find_control_tool(std::string_view name) {
    const std::string id = canonical_tool_id(name);
    for (const auto& t : control_tools()) {
        if (t.id == id) return &t;
    }
    return nullptr;
}

ToolResult dispatch_tool(std::string_view tool_id, std::string_view raw_args, SystemRegistry& registry) {
    const ToolSpec* spec = find_control_tool(tool_id);
    if (!spec) throw Error(ErrorCode::UnknownTool, "'" + std::string(tool_id) + "' is not a control tool");
    return spec->run(parse_action_input(raw_args), registry);
}

std::string describe_control_tools() {
    std::string out;
    for (const auto& t : control_tools()) {
        if (!out.empty()) out += '\n';
        out += t.id + "(" + t.usage + "): " + t.description;
    }
    return out;
}

}  // namespace agentctl::agents
