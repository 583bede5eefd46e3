#include "agentctl/llm/backend.hpp"

#include "agentctl/error.hpp"

namespace agentctl::llm {

UsageRecord& UsageRecord::operator+=(const UsageRecord& other) noexcept {
    prompt_tokens += other.prompt_tokens;
    completion_tokens += other.completion_tokens;
    wall_seconds += other.wall_seconds;
    estimated_cost += other.estimated_cost;
    return *this;
}

void validate(const CompletionRequest& request) {
    if (request.system_text.empty() && request.user_text.empty()) {
        throw Error(ErrorCode::ValidationError, "completion request has no text");
    }
    if (request.user_text.empty()) throw Error(ErrorCode::ValidationError, "completion request has empty user text");
    if (request.system_text.empty()) throw Error(ErrorCode::ValidationError, "completion request has empty system text");
    if (!(request.temperature >= 0.0 && request.temperature <= 2.0)) {
        throw Error(ErrorCode::ValidationError, "temperature must lie in [0, 2]");
    }
    if (request.max_output_tokens <= 0) throw Error(ErrorCode::ValidationError, "max_output_tokens must be positive");
}

std::int64_t estimate_tokens(std::string_view text) noexcept {
    return static_cast<std::int64_t>((text.size() + 3) / 4);
}

}  // namespace agentctl::llm
