#include "agentctl/metrics/failures.hpp"

#include <algorithm>
#include <set>

namespace agentctl::metrics {

namespace {

using trace::EventKind;
using trace::Json;

std::string str_or_empty(const Json& data, const char* key) {
    auto it = data.find(key);
    return it != data.end() && it->is_string() ? it->get<std::string>() : std::string{};
}

bool flag(const Json& data, const char* key) {
    auto it = data.find(key);
    return it != data.end() && it->is_boolean() && it->get<bool>();
}

std::vector<std::string> fold_repeats(const std::vector<std::string>& v) {
    std::vector<std::string> out;
    for (const auto& s : v) {
        if (out.empty() || out.back() != s) out.push_back(s);
    }
    return out;
}

}  // namespace

std::string_view to_string(FailureKind kind) noexcept {
    switch (kind) {
        case FailureKind::PlannerFailure: return "PlannerFailure";
        case FailureKind::ControllerDeviation: return "ControllerDeviation";
        case FailureKind::ParseFailure: return "ParseFailure";
        case FailureKind::CriticMisjudgement: return "CriticMisjudgement";
        case FailureKind::MemoryMisrecall: return "MemoryMisrecall";
        case FailureKind::RoutingError: return "RoutingError";
        case FailureKind::DeliveryFailure: return "DeliveryFailure";
        case FailureKind::IncorrectAnswer: return "IncorrectAnswer";
    }
    return "Unknown";
}

std::optional<FailureKind> failure_kind_from_string(std::string_view name) noexcept {
    for (int i = 0; i <= static_cast<int>(FailureKind::IncorrectAnswer); ++i) {
        if (to_string(static_cast<FailureKind>(i)) == name) return static_cast<FailureKind>(i);
    }
    return std::nullopt;
}

std::vector<FailureKind> classify_failures(const trace::RunTrace& trace, const GroundTruth& truth) {
    std::set<FailureKind> found;
    std::vector<std::string> routed, plan, controller_tools;
    bool have_plan = false;
    std::size_t verdicts = 0;
    const Json* final_answer = nullptr;

    for (const auto& ev : trace.events) {
        const Json& d = ev.data;
        switch (ev.kind) {
            case EventKind::AgentFinished:
                if (flag(d, "conditional")) routed.push_back(str_or_empty(d, "routed_next"));
                break;
            case EventKind::Plan: {
                plan.clear();
                have_plan = true;
                if (auto it = d.find("ordered_tools"); it != d.end() && it->is_array()) {
                    for (const auto& t : *it) plan.push_back(canonical_tool(t.is_string() ? t.get<std::string>() : ""));
                }
                if (!truth.plan.empty() && plan != truth.plan) found.insert(FailureKind::PlannerFailure);
                controller_tools.clear();
                break;
            }
            case EventKind::ToolCall:
                if (ev.agent == "Controller") controller_tools.push_back(canonical_tool(str_or_empty(d, "tool")));
                break;
            case EventKind::CriticVerdict: {
                if (flag(d, "forced")) break;
                const bool correct = verdicts < truth.critic_labels.size()
                                         ? truth.critic_labels[verdicts]
                                         : truth.controller_answer_matches(str_or_empty(d, "answer"));
                ++verdicts;
                if (flag(d, "accepted") != correct) found.insert(FailureKind::CriticMisjudgement);
                break;
            }
            case EventKind::Debug:
                if (str_or_empty(d, "error_class") == "ParseFailure" && !flag(d, "fixed")) found.insert(FailureKind::ParseFailure);
                break;
            case EventKind::Error: {
                const auto code = str_or_empty(d, "code");
                if (code == "NodeStalled" || code == "ParseFailure") found.insert(FailureKind::ParseFailure);
                break;
            }
            case EventKind::Memory:
                if (str_or_empty(d, "mode") == "store") {
                    if (!flag(d, "ok")) found.insert(FailureKind::MemoryMisrecall);
                } else if (truth.recall_hit ? flag(d, "hit") != *truth.recall_hit : !flag(d, "hit")) {
                    found.insert(FailureKind::MemoryMisrecall);
                }
                break;
            case EventKind::Delivery: {
                const auto delivered = str_or_empty(d, "delivered");
                if (!flag(d, "ok") || delivered != str_or_empty(d, "requested") ||
                    (truth.delivery && delivered != *truth.delivery)) {
                    found.insert(FailureKind::DeliveryFailure);
                }
                break;
            }
            case EventKind::FinalAnswer:
                final_answer = &d;
                break;
            default:
                break;
        }
    }
    if (have_plan && !controller_tools.empty() && fold_repeats(controller_tools) != plan) {
        found.insert(FailureKind::ControllerDeviation);
    }
    if (routed != truth.routes) found.insert(FailureKind::RoutingError);
    if (!final_answer || !truth.answer_matches(str_or_empty(*final_answer, "text"))) found.insert(FailureKind::IncorrectAnswer);
    return {found.begin(), found.end()};
}

std::optional<FailureKind> root_failure(const trace::RunTrace& trace, const GroundTruth& truth) {
    const auto all = classify_failures(trace, truth);
    if (all.empty()) return std::nullopt;
    return all.front();
}

}  // namespace agentctl::metrics
