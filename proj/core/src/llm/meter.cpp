#include "agentctl/llm/meter.hpp"

namespace agentctl::llm {

trace::Json usage_to_json(const UsageRecord& usage) {
    return {{"prompt_tokens", usage.prompt_tokens},
            {"completion_tokens", usage.completion_tokens},
            {"wall_seconds", usage.wall_seconds},
            {"cost", usage.estimated_cost}};
}

UsageRecord usage_from_json(const trace::Json& j) {
    UsageRecord u;
    u.prompt_tokens = j.value("prompt_tokens", std::int64_t{0});
    u.completion_tokens = j.value("completion_tokens", std::int64_t{0});
    u.wall_seconds = j.value("wall_seconds", 0.0);
    u.estimated_cost = j.value("cost", 0.0);
    return u;
}

UsageRecord meter_run(const trace::RunTrace& trace) {
    UsageRecord total;
    for (const trace::Event& e : trace.events) {
        if (e.kind == trace::EventKind::LlmCall) total += usage_from_json(e.data);
    }
    return total;
}

}  // namespace agentctl::llm
