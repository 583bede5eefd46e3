#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "agentctl/metrics/ground_truth.hpp"
#include "agentctl/trace/event.hpp"

namespace agentctl::metrics {

// Listed by precedence, which is also the order classify_failures reports
// them.
enum class FailureKind {
    PlannerFailure,
    ControllerDeviation,
    ParseFailure,
    CriticMisjudgement,
    MemoryMisrecall,
    RoutingError,
    DeliveryFailure,
    IncorrectAnswer,
};

std::string_view to_string(FailureKind kind) noexcept;
std::optional<FailureKind> failure_kind_from_string(std::string_view name) noexcept;

// Every failure class present in the run; empty for a clean run.
//   PlannerFailure       a plan differs from the annotated plan
//   ControllerDeviation  the Controller's attempted tools (repeats folded)
//                        differ from the last plan
//   CriticMisjudgement   a verdict disagrees with answer correctness
//   MemoryMisrecall      a recall outcome differs from the annotation, or a
//                        store failed
//   ParseFailure         an unfixed ParseFailure or a stalled node
//   RoutingError         a conditional route differs from the annotation
//   DeliveryFailure      a failed delivery or the wrong format
//   IncorrectAnswer      no final answer, or it fails the matcher
std::vector<FailureKind> classify_failures(const trace::RunTrace& trace, const GroundTruth& truth);

// Highest-precedence failure.
std::optional<FailureKind> root_failure(const trace::RunTrace& trace, const GroundTruth& truth);

}  // namespace agentctl::metrics
