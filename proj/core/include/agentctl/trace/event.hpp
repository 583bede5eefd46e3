#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace agentctl::trace {

using Json = nlohmann::json;

enum class EventKind {
    AgentStarted,
    Thought,
    ToolCall,
    Observation,
    PlotPayload,
    QuestionToUser,
    CriticVerdict,
    FinalAnswer,
    Error,
    AgentFinished,
    Plan,
    Debug,
    Memory,
    Delivery,
    LlmCall,
};

std::string_view to_string(EventKind kind) noexcept;
std::optional<EventKind> event_kind_from_string(std::string_view name) noexcept;

struct Event {
    std::uint64_t seq = 0;
    // Seconds since the owning session started.
    double t = 0.0;
    EventKind kind = EventKind::AgentStarted;
    std::string agent;
    Json data = Json::object();
};

struct RunTrace {
    std::string run_id;
    std::vector<Event> events;
};

// 64-bit FNV-1a, 16 lowercase hex digits.
std::uint64_t fnv1a64(std::string_view text) noexcept;
std::string digest(std::string_view text);

// Without timing, "t" and every "wall_seconds" field are dropped so that two
// replays of a scripted run serialize byte-identically.
Json to_json(const Event& event, bool include_timing = true);
Event event_from_json(const Json& j);

// One JSON object per line.
std::string to_jsonl(const std::vector<Event>& events, bool include_timing = true);
std::string to_jsonl(const RunTrace& trace, bool include_timing = true);
std::vector<Event> from_jsonl(std::string_view text);

std::vector<const Event*> select(const RunTrace& trace, EventKind kind);
std::vector<const Event*> select(const RunTrace& trace, EventKind kind, std::string_view agent);

}  // namespace agentctl::trace
