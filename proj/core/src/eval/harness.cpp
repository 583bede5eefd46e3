#include "agentctl/eval/harness.hpp"

#include <map>

#include "agentctl/llm/scripted.hpp"
#include "agentctl/tools/corpus.hpp"
#include "agentctl/tools/human.hpp"
#include "agentctl/tools/search.hpp"

namespace agentctl::eval {

BackendFactory scripted_backend_factory() {
    return [](const Scenario& s) -> std::unique_ptr<llm::Backend> {
        return std::make_unique<llm::ScriptedBackend>(llm::Script::parse(s.script));
    };
}

std::vector<RunRecord> run_scenario(const Scenario& scenario, const EvalOptions& options) {
    if (options.runs < 1) throw Error(ErrorCode::ValidationError, "runs must be at least 1");
    const BackendFactory factory = options.backend ? options.backend : scripted_backend_factory();

    std::shared_ptr<const tools::CorpusIndex> corpus;
    if (!scenario.corpus.empty()) corpus = std::make_shared<tools::CorpusIndex>(tools::ingest_corpus(scenario.corpus));
    std::shared_ptr<tools::SearchClient> search;
    if (scenario.search_fixtures) {
        search = std::make_shared<tools::FixtureSearch>(tools::FixtureSearch::load(*scenario.search_fixtures));
    }
    agents::GraphConfig config = options.config;
    if (scenario.critic_threshold) config.critic_threshold = *scenario.critic_threshold;

    std::vector<RunRecord> out;
    for (int rep = 0; rep < options.runs; ++rep) {
        auto backend = factory(scenario);
        auto memory = std::make_shared<tools::InMemoryStore>();
        for (const auto& r : scenario.memory_seed) memory->append(r);
        std::vector<std::string> replies;
        for (const auto& t : scenario.turns) replies.insert(replies.end(), t.replies.begin(), t.replies.end());

        agents::Resources res;
        res.backend = backend.get();
        res.memory = memory;
        res.corpus = corpus;
        res.search = search;
        res.human = std::make_shared<tools::ScriptedReplies>(replies);
        agents::Conversation conv(scenario.id + "#" + std::to_string(rep + 1), res, config);

        for (std::size_t t = 0; t < scenario.turns.size(); ++t) {
            RunRecord rec;
            rec.scenario_id = scenario.id;
            rec.category = scenario.category;
            rec.repetition = rep;
            rec.turn = t;
            try {
                auto result = conv.run_turn(scenario.turns[t].query);
                rec.trace = std::move(result.trace);
                rec.path = std::move(result.path);
                rec.final_answer = std::move(result.final_answer);
            } catch (const agents::TurnAborted& e) {
                rec.trace = e.trace();
                rec.path = e.path();
                rec.error = e.code();
                rec.error_message = e.what();
            }
            if (options.on_run) options.on_run(rec);
            out.push_back(std::move(rec));
        }
    }
    return out;
}

CategoryReport score_records(const std::string& name, const std::vector<const Scenario*>& scenarios,
                             const std::vector<RunRecord>& records) {
    std::map<std::string, const Scenario*> by_id;
    for (const Scenario* s : scenarios) by_id[s->id] = s;
    std::vector<trace::RunTrace> traces;
    std::vector<metrics::GroundTruth> truths;
    CategoryReport report;
    report.name = name;
    report.scenarios = scenarios.size();
    for (const auto& r : records) {
        auto it = by_id.find(r.scenario_id);
        if (it == by_id.end()) continue;
        traces.push_back(r.trace);
        truths.push_back(it->second->turns.at(r.turn).truth);
        if (r.error) ++report.aborted;
    }
    report.runs = traces.size();
    report.metrics = metrics::evaluate(traces, truths);
    return report;
}

CategoryReport run_category(const std::string& name, const std::vector<const Scenario*>& scenarios,
                            const EvalOptions& options, std::vector<RunRecord>* records) {
    std::vector<RunRecord> all;
    for (const Scenario* s : scenarios) {
        auto r = run_scenario(*s, options);
        all.insert(all.end(), std::make_move_iterator(r.begin()), std::make_move_iterator(r.end()));
    }
    CategoryReport report = score_records(name, scenarios, all);
    if (records) records->insert(records->end(), all.begin(), all.end());
    return report;
}

std::vector<CategoryReport> evaluate_all(const std::vector<Scenario>& scenarios, const EvalOptions& options,
                                         std::vector<RunRecord>* records) {
    std::vector<RunRecord> all;
    for (const auto& s : scenarios) {
        auto r = run_scenario(s, options);
        all.insert(all.end(), std::make_move_iterator(r.begin()), std::make_move_iterator(r.end()));
    }
    std::vector<CategoryReport> out;
    std::vector<const Scenario*> every;
    for (Category c : kCategories) {
        std::vector<const Scenario*> members;
        for (const auto& s : scenarios) {
            if (s.category == c) members.push_back(&s);
        }
        if (members.empty()) continue;
        out.push_back(score_records(std::string(display_name(c)), members, all));
        every.insert(every.end(), members.begin(), members.end());
    }
    if (!every.empty()) out.push_back(score_records("Overall", every, all));
    if (records) records->insert(records->end(), all.begin(), all.end());
    return out;
}

}  // namespace agentctl::eval
