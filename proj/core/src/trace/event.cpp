#include "agentctl/trace/event.hpp"

#include <array>
#include <cstdio>
#include <sstream>
#include <utility>

#include "agentctl/error.hpp"

namespace agentctl::trace {

namespace {

constexpr std::array<std::pair<EventKind, std::string_view>, 15> kKinds{{
    {EventKind::AgentStarted, "agent_started"},
    {EventKind::Thought, "thought"},
    {EventKind::ToolCall, "tool_call"},
    {EventKind::Observation, "observation"},
    {EventKind::PlotPayload, "plot_payload"},
    {EventKind::QuestionToUser, "question_to_user"},
    {EventKind::CriticVerdict, "critic_verdict"},
    {EventKind::FinalAnswer, "final_answer"},
    {EventKind::Error, "error"},
    {EventKind::AgentFinished, "agent_finished"},
    {EventKind::Plan, "plan"},
    {EventKind::Debug, "debug"},
    {EventKind::Memory, "memory"},
    {EventKind::Delivery, "delivery"},
    {EventKind::LlmCall, "llm_call"},
}};

void strip_timing(Json& j) {
    if (j.is_object()) {
        j.erase("wall_seconds");
        for (auto& [key, value] : j.items()) strip_timing(value);
    } else if (j.is_array()) {
        for (auto& value : j) strip_timing(value);
    }
}

}  // namespace

std::string_view to_string(EventKind kind) noexcept {
    for (const auto& [k, name] : kKinds) {
        if (k == kind) return name;
    }
    return "error";
}

std::optional<EventKind> event_kind_from_string(std::string_view name) noexcept {
    for (const auto& [k, n] : kKinds) {
        if (n == name) return k;
    }
    return std::nullopt;
}

std::uint64_t fnv1a64(std::string_view text) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string digest(std::string_view text) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(text)));
    return buf;
}

Json to_json(const Event& event, bool include_timing) {
    Json j;
    j["seq"] = event.seq;
    if (include_timing) j["t"] = event.t;
    j["kind"] = std::string(to_string(event.kind));
    j["agent"] = event.agent;
    j["data"] = event.data;
    if (!include_timing) strip_timing(j["data"]);
    return j;
}

Event event_from_json(const Json& j) {
    try {
        Event e;
        e.seq = j.at("seq").get<std::uint64_t>();
        e.t = j.value("t", 0.0);
        const std::string kind = j.at("kind").get<std::string>();
        const auto k = event_kind_from_string(kind);
        if (!k) throw Error(ErrorCode::ValidationError, "unknown event kind '" + kind + "'");
        e.kind = *k;
        e.agent = j.value("agent", std::string{});
        e.data = j.value("data", Json::object());
        return e;
    } catch (const Json::exception& ex) {
        throw Error(ErrorCode::ValidationError, std::string("malformed trace event: ") + ex.what());
    }
}

std::string to_jsonl(const std::vector<Event>& events, bool include_timing) {
    std::string out;
    for (const Event& e : events) {
        out += to_json(e, include_timing).dump();
        out += '\n';
    }
    return out;
}

std::string to_jsonl(const RunTrace& trace, bool include_timing) { return to_jsonl(trace.events, include_timing); }

std::vector<Event> from_jsonl(std::string_view text) {
    std::vector<Event> out;
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        Json j;
        try {
            j = Json::parse(line);
        } catch (const Json::parse_error& ex) {
            throw Error(ErrorCode::ValidationError, std::string("malformed trace line: ") + ex.what());
        }
        out.push_back(event_from_json(j));
    }
    return out;
}

std::vector<const Event*> select(const RunTrace& trace, EventKind kind) {
    std::vector<const Event*> out;
    for (const Event& e : trace.events) {
        if (e.kind == kind) out.push_back(&e);
    }
    return out;
}

std::vector<const Event*> select(const RunTrace& trace, EventKind kind, std::string_view agent) {
    std::vector<const Event*> out;
    for (const Event& e : trace.events) {
        if (e.kind == kind && e.agent == agent) out.push_back(&e);
    }
    return out;
}

}  // namespace agentctl::trace
