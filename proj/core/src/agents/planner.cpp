#include "agentctl/agents/planner.hpp"

#include <algorithm>
#include <cctype>
#include <regex>

#include "agentctl/error.hpp"

namespace agentctl::agents {

namespace {

struct Rule {
    std::vector<std::string> keywords;
    std::string objective;
};

// Conversion and representation objectives resolve against the system type
// and are handled after the table.
const std::vector<Rule>& rules() {
    static const std::vector<Rule> table = {
        {{"root locus", "root-locus", "rlocus"}, "root_locus"},
        {{"acker"}, "acker"},
        {{"lqr", "linear quadratic"}, "lqr"},
        {{"place"}, "place"},
        {{"step"}, "step_response"},
        {{"impulse"}, "impulse_response"},
        {{"forced"}, "forced_response"},
        {{"bode"}, "bode"},
        {{"nyquist"}, "nyquist"},
        {{"pzmap", "pole-zero", "pole zero"}, "pzmap"},
        {{"stabil"}, "is_stable"},
        {{"dc gain", "dcgain", "steady-state gain", "static gain"}, "dcgain"},
        {{"controllab", "ctrb"}, "ctrb"},
        {{"zero"}, "zeros"},
        {{"pole"}, "poles"},
        {{"feedback", "closed-loop", "closed loop"}, "feedback"},
        {{"series"}, "series"},
        {{"parallel"}, "parallel"},
        {{"lyapunov", "lyap"}, "lyap"},
        {{"convert", "tf2ss", "ss2tf", "realization", "realisation"}, "convert"},
        {{"transfer function"}, "tf"},
        {{"state space", "state-space"}, "ss"},
    };
    return table;
}

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
    return out;
}

enum class Family { Representation, Analysis, Design, Time };

Family family_of(std::string_view objective) {
    if (objective == "acker" || objective == "place" || objective == "lqr" || objective == "ctrb" || objective == "lyap") {
        return Family::Design;
    }
    if (objective == "step_response" || objective == "impulse_response" || objective == "forced_response") {
        return Family::Time;
    }
    if (objective == "tf" || objective == "ss" || objective == "tf2ss" || objective == "ss2tf" ||
        objective == "feedback" || objective == "series" || objective == "parallel") {
        return Family::Representation;
    }
    return Family::Analysis;
}

}  // namespace

const std::vector<std::string>& objective_vocabulary() {
    static const std::vector<std::string> vocab = [] {
        std::vector<std::string> v;
        for (const auto& r : rules()) {
            if (r.objective == "convert") {
                v.push_back("tf2ss");
                v.push_back("ss2tf");
            } else {
                v.push_back(r.objective);
            }
        }
        return v;
    }();
    return vocab;
}

std::optional<std::string> find_objective(std::string_view text) {
    const std::string t = lower(text);
    for (const auto& r : rules()) {
        for (const auto& k : r.keywords) {
            if (t.find(k) != std::string::npos) return r.objective;
        }
    }
    // vocabulary ids written out, e.g. a fallback reply of "impulse_response"
    for (const auto& v : objective_vocabulary()) {
        const std::regex word("(^|[^a-z0-9_.])" + v + "($|[^a-z0-9_])");
        if (std::regex_search(t, word)) return v;
    }
    return std::nullopt;
}

std::optional<std::string> find_representation(std::string_view text) {
    static const std::regex ss_cue(R"((^|[^A-Za-z_])A\s*\$?\s*=)");
    static const std::regex tf_num(R"(\bnum\b)", std::regex::icase);
    static const std::regex tf_den(R"(\bden\b)", std::regex::icase);
    const std::string s(text);
    if (std::regex_search(s, ss_cue)) return "SS";
    if (std::regex_search(s, tf_num) && std::regex_search(s, tf_den)) return "TF";
    return std::nullopt;
}

Plan make_plan(std::string_view system_type, std::string_view objective_in) {
    const bool ss = system_type == "SS";
    std::string objective(objective_in);
    if (objective == "convert") objective = ss ? "ss2tf" : "tf2ss";
    // the other form of a given system is a conversion
    if (objective == "tf" && ss) objective = "ss2tf";
    if (objective == "ss" && !ss) objective = "tf2ss";
    Plan plan{ss ? "SS" : "TF", objective, {}};
    auto& tools = plan.ordered_tools;
    switch (family_of(objective)) {
        case Family::Representation:
            if (objective == "tf" || objective == "ss" || objective == "ss2tf") {
                tools = {objective};
            } else if (objective == "tf2ss") {
                tools = {"tf", "tf2ss"};
            } else {
                tools = {ss ? "ss2tf" : "tf", objective};
            }
            break;
        case Family::Analysis: tools = {ss ? "ss" : "tf", objective}; break;
        case Family::Design:
            if (ss) {
                tools = {objective};
            } else {
                tools = {"tf", "tf2ss", objective};
            }
            break;
        case Family::Time: tools = {ss ? "ss2tf" : "tf", objective}; break;
    }
    return plan;
}

Plan planner_tool(std::string_view action_input, std::string_view turn_query, const PlanFallback& fallback) {
    std::string input(action_input);
    for (std::string_view prefix : {"query=", "query ="}) {
        if (input.starts_with(prefix)) input = input.substr(prefix.size());
    }
    auto objective = find_objective(input);
    if (!objective) objective = find_objective(turn_query);
    auto rep = find_representation(input);
    if (!rep) rep = find_representation(turn_query);
    if (!objective && fallback) {
        const std::string reply = fallback(objective_vocabulary());
        objective = find_objective(reply);
        if (!rep) rep = find_representation(reply);
        if (!objective) {
            throw Error(ErrorCode::PlanFailure, "no control objective in the query, and the planner reply '" +
                                                    reply.substr(0, 80) + "' names none");
        }
    }
    if (!objective) throw Error(ErrorCode::PlanFailure, "no control objective found in the query");
    return make_plan(rep.value_or("TF"), *objective);
}

std::string format_plan(const Plan& plan) {
    std::string tools;
    for (std::size_t i = 0; i < plan.ordered_tools.size(); ++i) {
        if (i) tools += ", ";
        tools += "'control." + plan.ordered_tools[i] + "'";
    }
    return "System Type: " + plan.system_type + ", Objective: " + plan.objective + ", Ordered Tools: [" + tools + "]";
}

}  // namespace agentctl::agents
