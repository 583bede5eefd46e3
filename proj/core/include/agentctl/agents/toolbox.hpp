#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "agentctl/agents/plot.hpp"
#include "agentctl/agents/react.hpp"
#include "agentctl/agents/registry.hpp"

namespace agentctl::agents {

struct ToolResult {
    std::string observation;
    std::optional<PlotPayload> plot;
    // Handle of a system the call stored in the registry.
    std::optional<std::string> handle;
};

struct ToolSpec {
    std::string id;
    // representation, analysis, design or simulation
    std::string category;
    std::string usage;
    std::string description;
    std::function<ToolResult(const ArgMap&, SystemRegistry&)> run;
};

// The Controller's kernel-backed tools.
const std::vector<ToolSpec>& control_tools();

// "control.tf" and " tf " both give "tf".
std::string canonical_tool_id(std::string_view name);
const ToolSpec* find_control_tool(std::string_view name);

// Runs a control tool on a raw Action Input. UnknownTool for an id outside
// the catalog, ArgParseError for malformed or mismatched arguments, and the
// kernel's own codes for numerical failures.
ToolResult dispatch_tool(std::string_view tool_id, std::string_view raw_args, SystemRegistry& registry);

// One "id(usage): description" line per control tool.
std::string describe_control_tools();

}  // namespace agentctl::agents
