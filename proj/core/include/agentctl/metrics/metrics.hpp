#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "agentctl/metrics/ground_truth.hpp"
#include "agentctl/trace/event.hpp"

namespace agentctl::metrics {

enum class MetricKind { E, R, A, P, J, S, F, D, C, T };

inline constexpr std::array<MetricKind, 8> kComponentKinds = {MetricKind::E, MetricKind::R, MetricKind::A,
                                                              MetricKind::P, MetricKind::J, MetricKind::S,
                                                              MetricKind::F, MetricKind::D};
inline constexpr std::array<MetricKind, 10> kAllKinds = {MetricKind::E, MetricKind::R, MetricKind::A, MetricKind::P,
                                                         MetricKind::J, MetricKind::S, MetricKind::F, MetricKind::D,
                                                         MetricKind::C, MetricKind::T};

// "E", "R", ...
std::string_view to_string(MetricKind kind) noexcept;
MetricKind metric_kind_from_string(std::string_view s);

// Indicator values of one run, one entry per agent activation (or per
// decision point for R and A). Empty means the agent never fired.
struct RunIndicators {
    std::vector<double> E, R, A, P, J, S, F, D;
    bool completed = false;

    const std::vector<double>& of(MetricKind kind) const;
    std::vector<double>& of(MetricKind kind);
};

RunIndicators extract_indicators(const trace::RunTrace& trace, const GroundTruth& truth);

// Outer mean over runs of the inner per-run means. Runs with no indicators
// are left out. EmptyEvaluation when there are no runs, MetricUndefined when
// every run is left out.
double score_indicators(MetricKind kind, const std::vector<RunIndicators>& runs);

double score_metric(MetricKind kind, const std::vector<trace::RunTrace>& traces,
                    const std::vector<GroundTruth>& truths);
double score_completion(const std::vector<trace::RunTrace>& traces, const std::vector<GroundTruth>& truths);

struct MetricsReport {
    std::array<std::optional<double>, 10> scores{};
    std::size_t tau = 0;
    // Means per run.
    double wall_seconds = 0.0;
    double cost = 0.0;
    double tokens = 0.0;

    std::optional<double> get(MetricKind kind) const;
    void set(MetricKind kind, std::optional<double> value);
};

// Mean of the eight components. MetricUndefined names the first missing one.
double total_score(const MetricsReport& report);

// All ten scores plus usage. Undefined components stay empty, and T is
// only set when all eight are present.
MetricsReport evaluate(const std::vector<trace::RunTrace>& traces, const std::vector<GroundTruth>& truths);
MetricsReport evaluate(const std::vector<RunIndicators>& runs);

// Wall time of a run: last event time minus first.
double run_seconds(const trace::RunTrace& trace);

}  // namespace agentctl::metrics
