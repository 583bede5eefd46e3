#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace agentctl::llm {

struct CompletionRequest {
    std::string system_text;
    std::string user_text;
    std::string model_name;
    double temperature = 0.0;
    int max_output_tokens = 1024;

    // Caller context. The scripted backend keys on these; remote backends
    // ignore them.
    std::string node;
    int step = 0;
    std::string latest_user_message;
};

struct UsageRecord {
    std::int64_t prompt_tokens = 0;
    std::int64_t completion_tokens = 0;
    double wall_seconds = 0.0;
    double estimated_cost = 0.0;

    std::int64_t total_tokens() const noexcept { return prompt_tokens + completion_tokens; }
    UsageRecord& operator+=(const UsageRecord& other) noexcept;
};

struct Completion {
    std::string text;
    UsageRecord usage;
};

// ValidationError on empty texts, temperature outside [0, 2] or a
// nonpositive token budget.
void validate(const CompletionRequest& request);

// ceil(chars / 4); used when a backend does not report token counts.
std::int64_t estimate_tokens(std::string_view text) noexcept;

class Backend {
public:
    virtual ~Backend() = default;
    virtual Completion complete(const CompletionRequest& request) = 0;
    virtual std::string_view name() const noexcept = 0;
};

}  // namespace agentctl::llm
