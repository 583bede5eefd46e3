#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace agentctl::metrics {

// One check applied to an answer text.
//   numeric    every expected value appears, in order, among the numbers in
//              the text, each within tolerance
//   substring  case-insensitive containment
//   regex      ECMAScript search, case-insensitive
struct AnswerMatcher {
    enum class Kind { Numeric, Substring, Regex };

    Kind kind = Kind::Substring;
    std::vector<double> values;
    double tolerance = 0.01;
    std::string pattern;

    bool matches(std::string_view text) const;

    static AnswerMatcher numeric(std::vector<double> values, double tolerance = 0.01);
    static AnswerMatcher substring(std::string text);
    static AnswerMatcher regex(std::string pattern);
};

// Signed decimal numbers in reading order.
std::vector<double> extract_numbers(std::string_view text);

// Annotated reference for one run.
struct GroundTruth {
    // All matchers must hold.
    std::vector<AnswerMatcher> answer;
    // Checks for the Controller's own output; falls back to `answer`.
    std::vector<AnswerMatcher> controller_answer;
    // Expected routed_next at each conditional decision, in order.
    std::vector<std::string> routes;
    // Optimal agent sequence, Supervisor first.
    std::vector<std::string> agents;
    // Expected Planner output; "control." prefixes are ignored.
    std::vector<std::string> plan;
    std::optional<std::string> delivery;
    // Expected outcome of recall attempts: true = hit, false = miss.
    std::optional<bool> recall_hit;
    // Correctness of each critic-judged answer, in order. Missing entries are
    // computed from controller_answer.
    std::vector<bool> critic_labels;

    bool answer_matches(std::string_view text) const;
    bool controller_answer_matches(std::string_view text) const;
};

// ScenarioError with a field path ("<where>.answer[0].numeric") on schema
// violations.
AnswerMatcher matcher_from_json(const nlohmann::json& j, const std::string& where);
GroundTruth ground_truth_from_json(const nlohmann::json& j, const std::string& where = "ground_truth");
nlohmann::json to_json(const AnswerMatcher& m);
nlohmann::json to_json(const GroundTruth& gt);

// "control.lqr" -> "lqr"
std::string canonical_tool(std::string_view id);

}  // namespace agentctl::metrics
