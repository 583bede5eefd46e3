#pragma once

#include "agentctl/llm/backend.hpp"
#include "agentctl/trace/event.hpp"

namespace agentctl::llm {

// llm_call event payload written by the agent runtime.
trace::Json usage_to_json(const UsageRecord& usage);
UsageRecord usage_from_json(const trace::Json& j);

// Sum of every llm_call event in the trace.
UsageRecord meter_run(const trace::RunTrace& trace);

}  // namespace agentctl::llm
