#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace agentctl::agents {

struct Plan {
    std::string system_type;  // "TF" or "SS"
    std::string objective;    // equals the last ordered tool
    std::vector<std::string> ordered_tools;

    bool operator==(const Plan&) const = default;
};

// Objective terms in match precedence order, e.g. "root_locus" before "acker".
const std::vector<std::string>& objective_vocabulary();

// First objective keyword found in the text, if any.
std::optional<std::string> find_objective(std::string_view text);
// "SS" for an "A =" assignment, "TF" for num/den, nothing otherwise.
std::optional<std::string> find_representation(std::string_view text);

// Tool order for an objective on a representation.
Plan make_plan(std::string_view system_type, std::string_view objective);

// Keyword classification. The action input is searched first and the turn
// query second, separately for the objective and the representation; the
// representation defaults to TF. When no objective is found the fallback is
// asked once (with the vocabulary) and its reply is searched the same way.
// PlanFailure when that also yields nothing.
using PlanFallback = std::function<std::string(const std::vector<std::string>& vocabulary)>;
Plan planner_tool(std::string_view action_input, std::string_view turn_query = {}, const PlanFallback& fallback = {});

// "System Type: TF, Objective: step_response, Ordered Tools: ['control.tf', 'control.step_response']"
std::string format_plan(const Plan& plan);

}  // namespace agentctl::agents
