#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "agentctl/trace/event.hpp"

// Payload builders for the trace events the agent graph emits. The metrics
// scorers read exactly these fields.
namespace agentctl::metrics::events {

using trace::Json;

// agent_started: {"input_digest"}
Json agent_started(std::string_view input);

// agent_finished: {"output", "output_digest", "conditional", "routed_next"}
// routed_next is null for a node that ends the run.
Json agent_finished(std::string_view output, const std::optional<std::string>& routed_next, bool conditional);

// plan: {"system_type", "objective", "ordered_tools"}
Json plan(std::string_view system_type, std::string_view objective, const std::vector<std::string>& ordered_tools);

// tool_call: {"tool", "args", "args_digest", "ok", "error"?}
Json tool_call(std::string_view tool, std::string_view args, bool ok, std::string_view error = {});

// observation: {"tool", "text"}
Json observation(std::string_view tool, std::string_view text);

// critic_verdict: {"similarity", "accepted", "threshold", "forced", "answer"}
Json critic_verdict(double similarity, bool accepted, double threshold, bool forced, std::string_view answer);

// debug: {"error_class", "detected", "fixed", "advice"}
Json debug(std::string_view error_class, bool detected, bool fixed, std::string_view advice);

// memory: {"mode": "store", "ok"} or {"mode": "recall", "hit", "similarity"}
Json memory_store(bool ok);
Json memory_recall(bool hit, double similarity);

// delivery: {"requested", "delivered", "ok", "artifact"?}
Json delivery(std::string_view requested, std::string_view delivered, bool ok, std::string_view artifact = {});

// final_answer: {"text"}
Json final_answer(std::string_view text);

// error: {"code", "message"}
Json error(std::string_view code, std::string_view message);

}  // namespace agentctl::metrics::events
