#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "agentctl/llm/backend.hpp"

namespace agentctl::tools {

enum class ReasonMode { Cot, Tot };

inline constexpr int kTotPaths = 3;

struct ReasonContext {
    std::string model_name;
    std::string latest_user_message;
    double temperature = 0.0;
    // Invoked after every backend call, for metering.
    std::function<void(const llm::CompletionRequest&, const llm::Completion&)> on_call;
};

struct ReasonResult {
    std::vector<std::string> paths;
    std::size_t selected = 0;
    std::string text;
};

// CoT: one completion under a numbered-steps scaffold (node
// "Reasoner.cot_tool"). ToT: three candidate paths then one selection
// completion (node "Reasoner.tot_tool", steps 0..3).
ReasonResult reason_tool(ReasonMode mode, std::string_view query, llm::Backend& backend, const ReasonContext& context);

}  // namespace agentctl::tools
