#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "agentctl/agents/graph.hpp"
#include "agentctl/eval/scenario.hpp"
#include "agentctl/llm/backend.hpp"
#include "agentctl/metrics/metrics.hpp"

namespace agentctl::eval {

// One turn of one repetition.
struct RunRecord {
    std::string scenario_id;
    Category category = Category::SystemRepresentation;
    int repetition = 0;
    std::size_t turn = 0;
    trace::RunTrace trace;
    std::vector<std::string> path;
    std::string final_answer;
    // Set when the turn ended in TurnAborted.
    std::optional<ErrorCode> error;
    std::string error_message;
};

using BackendFactory = std::function<std::unique_ptr<llm::Backend>(const Scenario&)>;

// ScriptedBackend over the scenario's script.
BackendFactory scripted_backend_factory();

struct EvalOptions {
    int runs = 20;
    agents::GraphConfig config;
    // Scripted when unset.
    BackendFactory backend;
    // Called after every turn.
    std::function<void(const RunRecord&)> on_run;
};

// Every repetition starts a fresh session whose memory holds the scenario's
// seed records. Turns within a repetition share the session. A turn that
// aborts is recorded with its partial trace and the batch continues.
std::vector<RunRecord> run_scenario(const Scenario& scenario, const EvalOptions& options);

struct CategoryReport {
    // Category display name or "Overall".
    std::string name;
    metrics::MetricsReport metrics;
    std::size_t scenarios = 0;
    std::size_t runs = 0;
    std::size_t aborted = 0;
};

// Scores the records of the given scenarios (one run per turn trace).
CategoryReport score_records(const std::string& name, const std::vector<const Scenario*>& scenarios,
                             const std::vector<RunRecord>& records);

// Runs each scenario τ times and scores the result.
CategoryReport run_category(const std::string& name, const std::vector<const Scenario*>& scenarios,
                            const EvalOptions& options, std::vector<RunRecord>* records = nullptr);

// One row per category that has scenarios, in the fixed order, then
// Overall over the union. Each scenario runs τ times once.
std::vector<CategoryReport> evaluate_all(const std::vector<Scenario>& scenarios, const EvalOptions& options,
                                         std::vector<RunRecord>* records = nullptr);

}  // namespace agentctl::eval
