#include "agentctl/metrics/metrics.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>

#include "agentctl/error.hpp"
#include "agentctl/llm/meter.hpp"

namespace agentctl::metrics {

namespace {

using trace::EventKind;
using trace::Json;

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
}

std::string str_or_empty(const Json& data, const char* key) {
    auto it = data.find(key);
    return it != data.end() && it->is_string() ? it->get<std::string>() : std::string{};
}

bool flag(const Json& data, const char* key) {
    auto it = data.find(key);
    return it != data.end() && it->is_boolean() && it->get<bool>();
}

// Positional agreement over max(len) slots, so extra or missing entries
// count against the run.
std::vector<double> positional(const std::vector<std::string>& actual, const std::vector<std::string>& expected) {
    const std::size_t q = std::max(actual.size(), expected.size());
    std::vector<double> out(q, 0.0);
    for (std::size_t i = 0; i < std::min(actual.size(), expected.size()); ++i) out[i] = actual[i] == expected[i] ? 1.0 : 0.0;
    return out;
}

double mean(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size()); }

void check_sizes(std::size_t traces, std::size_t truths) {
    if (traces == 0) throw Error(ErrorCode::EmptyEvaluation, "no runs to score");
    if (traces != truths) {
        throw Error(ErrorCode::ValidationError, std::to_string(traces) + " traces but " + std::to_string(truths) +
                                                    " ground truths");
    }
}

}  // namespace

std::string_view to_string(MetricKind kind) noexcept {
    static constexpr std::array<std::string_view, 10> names = {"E", "R", "A", "P", "J", "S", "F", "D", "C", "T"};
    return names[static_cast<std::size_t>(kind)];
}

MetricKind metric_kind_from_string(std::string_view s) {
    if (s.starts_with("M_")) s.remove_prefix(2);
    for (auto k : kAllKinds) {
        if (to_string(k) == s) return k;
    }
    throw Error(ErrorCode::ValidationError, "unknown metric '" + std::string(s) + "'");
}

const std::vector<double>& RunIndicators::of(MetricKind kind) const {
    switch (kind) {
        case MetricKind::E: return E;
        case MetricKind::R: return R;
        case MetricKind::A: return A;
        case MetricKind::P: return P;
        case MetricKind::J: return J;
        case MetricKind::S: return S;
        case MetricKind::F: return F;
        case MetricKind::D: return D;
        default: break;
    }
    throw Error(ErrorCode::ValidationError, "metric " + std::string(to_string(kind)) + " has no per-agent indicators");
}

std::vector<double>& RunIndicators::of(MetricKind kind) {
    return const_cast<std::vector<double>&>(std::as_const(*this).of(kind));
}

RunIndicators extract_indicators(const trace::RunTrace& trace, const GroundTruth& truth) {
    RunIndicators out;
    std::vector<std::string> routed, executed;
    std::size_t verdicts = 0;
    const Json* final_answer = nullptr;

    for (const auto& ev : trace.events) {
        const Json& d = ev.data;
        switch (ev.kind) {
            case EventKind::AgentStarted:
                executed.push_back(ev.agent);
                break;
            case EventKind::AgentFinished:
                if (ev.agent == "Controller") out.E.push_back(truth.controller_answer_matches(str_or_empty(d, "output")) ? 1 : 0);
                if (flag(d, "conditional")) routed.push_back(str_or_empty(d, "routed_next"));
                break;
            case EventKind::Plan: {
                std::vector<std::string> tools;
                if (auto it = d.find("ordered_tools"); it != d.end() && it->is_array()) {
                    for (const auto& t : *it) tools.push_back(canonical_tool(t.is_string() ? t.get<std::string>() : ""));
                }
                out.P.push_back(!truth.plan.empty() && tools == truth.plan ? 1 : 0);
                break;
            }
            case EventKind::CriticVerdict: {
                if (flag(d, "forced")) break;
                const bool correct = verdicts < truth.critic_labels.size()
                                         ? truth.critic_labels[verdicts]
                                         : truth.controller_answer_matches(str_or_empty(d, "answer"));
                ++verdicts;
                out.J.push_back(flag(d, "accepted") == correct ? 1 : 0);
                break;
            }
            case EventKind::Debug:
                out.S.push_back(0.5 * (flag(d, "detected") ? 1 : 0) + 0.5 * (flag(d, "fixed") ? 1 : 0));
                break;
            case EventKind::Memory: {
                bool ok = false;
                if (str_or_empty(d, "mode") == "store") {
                    ok = flag(d, "ok");
                } else {
                    const bool hit = flag(d, "hit");
                    ok = truth.recall_hit ? hit == *truth.recall_hit : hit;
                }
                out.F.push_back(ok ? 1 : 0);
                break;
            }
            case EventKind::Delivery: {
                const std::string delivered = lower(str_or_empty(d, "delivered"));
                bool ok = flag(d, "ok") && !delivered.empty() && delivered == lower(str_or_empty(d, "requested"));
                if (truth.delivery && delivered != *truth.delivery) ok = false;
                out.D.push_back(ok ? 1 : 0);
                break;
            }
            case EventKind::FinalAnswer:
                final_answer = &d;
                break;
            default:
                break;
        }
    }
    out.R = positional(routed, truth.routes);
    out.A = positional(executed, truth.agents);
    out.completed = final_answer && truth.answer_matches(str_or_empty(*final_answer, "text"));
    return out;
}

double score_indicators(MetricKind kind, const std::vector<RunIndicators>& runs) {
    if (runs.empty()) throw Error(ErrorCode::EmptyEvaluation, "no runs to score");
    if (kind == MetricKind::C) {
        double hits = 0;
        for (const auto& r : runs) hits += r.completed ? 1 : 0;
        return hits / static_cast<double>(runs.size());
    }
    if (kind == MetricKind::T) {
        MetricsReport report = evaluate(runs);
        return total_score(report);
    }
    double sum = 0;
    std::size_t counted = 0;
    for (const auto& r : runs) {
        const auto& v = r.of(kind);
        if (v.empty()) continue;
        sum += mean(v);
        ++counted;
    }
    if (counted == 0) throw Error(ErrorCode::MetricUndefined, "M_" + std::string(to_string(kind)) + ": the agent never fired");
    return sum / static_cast<double>(counted);
}

double score_metric(MetricKind kind, const std::vector<trace::RunTrace>& traces, const std::vector<GroundTruth>& truths) {
    check_sizes(traces.size(), truths.size());
    std::vector<RunIndicators> runs;
    for (std::size_t i = 0; i < traces.size(); ++i) runs.push_back(extract_indicators(traces[i], truths[i]));
    return score_indicators(kind, runs);
}

double score_completion(const std::vector<trace::RunTrace>& traces, const std::vector<GroundTruth>& truths) {
    return score_metric(MetricKind::C, traces, truths);
}

std::optional<double> MetricsReport::get(MetricKind kind) const { return scores[static_cast<std::size_t>(kind)]; }

void MetricsReport::set(MetricKind kind, std::optional<double> value) { scores[static_cast<std::size_t>(kind)] = value; }

double total_score(const MetricsReport& report) {
    double sum = 0;
    for (auto k : kComponentKinds) {
        const auto v = report.get(k);
        if (!v) throw Error(ErrorCode::MetricUndefined, "M_T needs M_" + std::string(to_string(k)));
        sum += *v;
    }
    return sum / static_cast<double>(kComponentKinds.size());
}

MetricsReport evaluate(const std::vector<RunIndicators>& runs) {
    if (runs.empty()) throw Error(ErrorCode::EmptyEvaluation, "no runs to score");
    MetricsReport report;
    report.tau = runs.size();
    for (auto k : kComponentKinds) {
        try {
            report.set(k, score_indicators(k, runs));
        } catch (const Error& e) {
            if (e.code() != ErrorCode::MetricUndefined) throw;
        }
    }
    report.set(MetricKind::C, score_indicators(MetricKind::C, runs));
    bool complete = true;
    for (auto k : kComponentKinds) complete = complete && report.get(k).has_value();
    if (complete) report.set(MetricKind::T, total_score(report));
    return report;
}

double run_seconds(const trace::RunTrace& trace) {
    if (trace.events.size() < 2) return 0.0;
    return std::max(0.0, trace.events.back().t - trace.events.front().t);
}

MetricsReport evaluate(const std::vector<trace::RunTrace>& traces, const std::vector<GroundTruth>& truths) {
    check_sizes(traces.size(), truths.size());
    std::vector<RunIndicators> runs;
    double seconds = 0, cost = 0, tokens = 0;
    for (std::size_t i = 0; i < traces.size(); ++i) {
        runs.push_back(extract_indicators(traces[i], truths[i]));
        const auto usage = llm::meter_run(traces[i]);
        seconds += run_seconds(traces[i]);
        cost += usage.estimated_cost;
        tokens += static_cast<double>(usage.total_tokens());
    }
    MetricsReport report = evaluate(runs);
    const double n = static_cast<double>(traces.size());
    report.wall_seconds = seconds / n;
    report.cost = cost / n;
    report.tokens = tokens / n;
    return report;
}

}  // namespace agentctl::metrics
