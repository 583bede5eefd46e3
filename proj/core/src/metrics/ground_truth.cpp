#include "agentctl/metrics/ground_truth.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <regex>

#include "agentctl/error.hpp"

namespace agentctl::metrics {

namespace {

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
    return out;
}

[[noreturn]] void schema_error(const std::string& where, const std::string& what) {
    throw Error(ErrorCode::ScenarioError, where + ": " + what);
}

std::vector<std::string> string_list(const nlohmann::json& j, const std::string& where) {
    if (!j.is_array()) schema_error(where, "expected an array of strings");
    std::vector<std::string> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_string() || j[i].get<std::string>().empty()) {
            schema_error(where + "[" + std::to_string(i) + "]", "expected a nonempty string");
        }
        out.push_back(j[i].get<std::string>());
    }
    return out;
}

std::vector<AnswerMatcher> matcher_list(const nlohmann::json& j, const std::string& where) {
    std::vector<AnswerMatcher> out;
    if (j.is_array()) {
        if (j.empty()) schema_error(where, "matcher list is empty");
        for (std::size_t i = 0; i < j.size(); ++i) out.push_back(matcher_from_json(j[i], where + "[" + std::to_string(i) + "]"));
    } else {
        out.push_back(matcher_from_json(j, where));
    }
    return out;
}

bool all_match(const std::vector<AnswerMatcher>& ms, std::string_view text) {
    return !ms.empty() && std::all_of(ms.begin(), ms.end(), [&](const AnswerMatcher& m) { return m.matches(text); });
}

}  // namespace

std::vector<double> extract_numbers(std::string_view text) {
    static const std::regex number(R"([-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)");
    std::vector<double> out;
    const std::string s(text);
    for (auto it = std::sregex_iterator(s.begin(), s.end(), number); it != std::sregex_iterator(); ++it) {
        out.push_back(std::stod(it->str()));
    }
    return out;
}

bool AnswerMatcher::matches(std::string_view text) const {
    switch (kind) {
        case Kind::Numeric: {
            const auto found = extract_numbers(text);
            std::size_t next = 0;
            for (double v : values) {
                while (next < found.size() && std::abs(found[next] - v) > tolerance + 1e-12) ++next;
                if (next == found.size()) return false;
                ++next;
            }
            return true;
        }
        case Kind::Substring:
            return lower(text).find(lower(pattern)) != std::string::npos;
        case Kind::Regex:
            return std::regex_search(std::string(text),
                                     std::regex(pattern, std::regex::ECMAScript | std::regex::icase));
    }
    return false;
}

AnswerMatcher AnswerMatcher::numeric(std::vector<double> values, double tolerance) {
    AnswerMatcher m;
    m.kind = Kind::Numeric;
    m.values = std::move(values);
    m.tolerance = tolerance;
    return m;
}

AnswerMatcher AnswerMatcher::substring(std::string text) {
    AnswerMatcher m;
    m.pattern = std::move(text);
    return m;
}

AnswerMatcher AnswerMatcher::regex(std::string pattern) {
    AnswerMatcher m;
    m.kind = Kind::Regex;
    m.pattern = std::move(pattern);
    return m;
}

bool GroundTruth::answer_matches(std::string_view text) const { return all_match(answer, text); }

bool GroundTruth::controller_answer_matches(std::string_view text) const {
    return all_match(controller_answer.empty() ? answer : controller_answer, text);
}

AnswerMatcher matcher_from_json(const nlohmann::json& j, const std::string& where) {
    if (!j.is_object()) schema_error(where, "matcher must be an object");
    int kinds = static_cast<int>(j.contains("numeric")) + static_cast<int>(j.contains("substring")) +
                static_cast<int>(j.contains("regex"));
    if (kinds != 1) schema_error(where, "matcher needs exactly one of numeric, substring, regex");
    if (j.contains("numeric")) {
        const auto& v = j["numeric"];
        if (!v.is_array() || v.empty()) schema_error(where + ".numeric", "expected a nonempty array of numbers");
        std::vector<double> values;
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (!v[i].is_number()) schema_error(where + ".numeric[" + std::to_string(i) + "]", "expected a number");
            values.push_back(v[i].get<double>());
        }
        double tol = 0.01;
        if (j.contains("tolerance")) {
            if (!j["tolerance"].is_number() || j["tolerance"].get<double>() < 0) {
                schema_error(where + ".tolerance", "expected a nonnegative number");
            }
            tol = j["tolerance"].get<double>();
        }
        return AnswerMatcher::numeric(std::move(values), tol);
    }
    const char* key = j.contains("substring") ? "substring" : "regex";
    if (!j[key].is_string() || j[key].get<std::string>().empty()) {
        schema_error(where + "." + key, "expected a nonempty string");
    }
    if (j.contains("substring")) return AnswerMatcher::substring(j[key].get<std::string>());
    try {
        std::regex probe(j[key].get<std::string>(), std::regex::ECMAScript | std::regex::icase);
    } catch (const std::regex_error& ex) {
        schema_error(where + ".regex", std::string("bad pattern: ") + ex.what());
    }
    return AnswerMatcher::regex(j[key].get<std::string>());
}

GroundTruth ground_truth_from_json(const nlohmann::json& j, const std::string& where) {
    if (!j.is_object()) schema_error(where, "expected an object");
    static const std::vector<std::string> known = {"answer", "controller_answer", "routes", "agents", "plan",
                                                   "delivery", "recall", "critic_labels"};
    for (const auto& [key, value] : j.items()) {
        if (std::find(known.begin(), known.end(), key) == known.end()) schema_error(where + "." + key, "unknown field");
    }
    GroundTruth gt;
    if (!j.contains("answer")) schema_error(where + ".answer", "required");
    gt.answer = matcher_list(j["answer"], where + ".answer");
    if (j.contains("controller_answer")) gt.controller_answer = matcher_list(j["controller_answer"], where + ".controller_answer");
    if (!j.contains("agents")) schema_error(where + ".agents", "required");
    gt.agents = string_list(j["agents"], where + ".agents");
    if (gt.agents.empty()) schema_error(where + ".agents", "agent sequence is empty");
    if (j.contains("routes")) gt.routes = string_list(j["routes"], where + ".routes");
    if (j.contains("plan")) {
        for (auto& t : string_list(j["plan"], where + ".plan")) gt.plan.push_back(canonical_tool(t));
    }
    if (j.contains("delivery")) {
        if (!j["delivery"].is_string()) schema_error(where + ".delivery", "expected a string");
        gt.delivery = lower(j["delivery"].get<std::string>());
    }
    if (j.contains("recall")) {
        const auto& r = j["recall"];
        if (r == "hit") {
            gt.recall_hit = true;
        } else if (r == "miss") {
            gt.recall_hit = false;
        } else {
            schema_error(where + ".recall", "expected \"hit\" or \"miss\"");
        }
    }
    if (j.contains("critic_labels")) {
        const auto& c = j["critic_labels"];
        if (!c.is_array()) schema_error(where + ".critic_labels", "expected an array of booleans");
        for (std::size_t i = 0; i < c.size(); ++i) {
            if (!c[i].is_boolean()) schema_error(where + ".critic_labels[" + std::to_string(i) + "]", "expected a boolean");
            gt.critic_labels.push_back(c[i].get<bool>());
        }
    }
    return gt;
}

nlohmann::json to_json(const AnswerMatcher& m) {
    switch (m.kind) {
        case AnswerMatcher::Kind::Numeric: return {{"numeric", m.values}, {"tolerance", m.tolerance}};
        case AnswerMatcher::Kind::Substring: return {{"substring", m.pattern}};
        case AnswerMatcher::Kind::Regex: return {{"regex", m.pattern}};
    }
    return {};
}

nlohmann::json to_json(const GroundTruth& gt) {
    nlohmann::json j;
    j["answer"] = nlohmann::json::array();
    for (const auto& m : gt.answer) j["answer"].push_back(to_json(m));
    if (!gt.controller_answer.empty()) {
        j["controller_answer"] = nlohmann::json::array();
        for (const auto& m : gt.controller_answer) j["controller_answer"].push_back(to_json(m));
    }
    j["agents"] = gt.agents;
    if (!gt.routes.empty()) j["routes"] = gt.routes;
    if (!gt.plan.empty()) j["plan"] = gt.plan;
    if (gt.delivery) j["delivery"] = *gt.delivery;
    if (gt.recall_hit) j["recall"] = *gt.recall_hit ? "hit" : "miss";
    if (!gt.critic_labels.empty()) j["critic_labels"] = gt.critic_labels;
    return j;
}

std::string canonical_tool(std::string_view id) {
    constexpr std::string_view prefix = "control.";
    if (id.starts_with(prefix)) id.remove_prefix(prefix.size());
    return std::string(id);
}

}  // namespace agentctl::metrics
