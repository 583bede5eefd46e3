#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "agentctl/agents/graph.hpp"
#include "agentctl/agents/plot.hpp"
#include "agentctl/error.hpp"
#include "agentctl/eval/harness.hpp"
#include "agentctl/eval/report.hpp"
#include "agentctl/eval/scenario.hpp"
#include "agentctl/llm/http_backend.hpp"
#include "agentctl/llm/scripted.hpp"
#include "agentctl/metrics/failures.hpp"
#include "agentctl/service/http_api.hpp"
#include "agentctl/service/session_service.hpp"
#include "agentctl/tools/corpus.hpp"
#include "agentctl/tools/human.hpp"
#include "agentctl/tools/memory.hpp"
#include "agentctl/tools/search.hpp"

// after the Eigen users: <resolv.h> defines _res
#include <httplib.h>

namespace fs = std::filesystem;
using namespace agentctl;

namespace {

struct Globals {
    std::string home;
    std::string backend = "scripted";
    std::string script;
    std::string search;
    double critic_threshold = 0.5;
    bool verbose = false;
};

fs::path home_dir(const Globals& g) {
    if (!g.home.empty()) return g.home;
    if (const char* h = std::getenv("AGENTCTL_HOME"); h && *h) return h;
    return ".agentctl";
}

fs::path corpus_dir(const Globals& g) { return home_dir(g) / "corpus"; }
fs::path plot_file(const Globals& g) { return home_dir(g) / "last_plot.json"; }

std::string read_text(const fs::path& p) {
    std::ifstream in(p);
    if (!in) throw Error(ErrorCode::ValidationError, "cannot read " + p.string());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

std::unique_ptr<llm::Backend> make_backend(const Globals& g) {
    if (g.backend == "http") return std::make_unique<llm::HttpBackend>(llm::HttpBackendConfig::from_env());
    llm::Script script = g.script.empty() ? llm::Script{} : llm::Script::load(g.script);
    return std::make_unique<llm::ScriptedBackend>(std::move(script));
}

std::shared_ptr<const tools::CorpusIndex> load_corpus(const Globals& g) {
    std::error_code ec;
    if (!fs::is_directory(corpus_dir(g), ec) || fs::is_empty(corpus_dir(g), ec)) return nullptr;
    return std::make_shared<tools::CorpusIndex>(tools::ingest_corpus({corpus_dir(g)}));
}

std::shared_ptr<tools::SearchClient> load_search(const Globals& g) {
    if (g.search.empty()) return nullptr;
    return std::make_shared<tools::FixtureSearch>(tools::FixtureSearch::load(g.search));
}

agents::GraphConfig graph_config(const Globals& g) {
    agents::GraphConfig c;
    c.critic_threshold = g.critic_threshold;
    if (const char* m = std::getenv("AGENTCTL_MODEL"); m && *m) c.model_name = m;
    c.output_dir = home_dir(g) / "out";
    return c;
}

void save_plot(const Globals& g, const agents::PlotPayload& plot) {
    fs::create_directories(home_dir(g));
    std::ofstream(plot_file(g)) << plot.dump(2) << '\n';
}

void print_event(const trace::Event& e) {
    std::cerr << "[" << e.seq << "] " << trace::to_string(e.kind) << " " << e.agent;
    if (e.kind != trace::EventKind::PlotPayload) std::cerr << " " << e.data.dump();
    std::cerr << '\n';
}

int run_turns(const Globals& g, const std::vector<std::string>& queries, bool repl) {
    auto backend = make_backend(g);
    agents::Resources res;
    res.backend = backend.get();
    fs::create_directories(home_dir(g));
    res.memory = std::make_shared<tools::FileMemoryStore>(home_dir(g) / "memory.log");
    res.corpus = load_corpus(g);
    res.search = load_search(g);
    res.human = std::make_shared<tools::StreamChannel>(std::cin, std::cout);
    const agents::GraphConfig config = graph_config(g);
    fs::create_directories(config.output_dir);
    agents::Conversation conv("cli", res, config);
    if (g.verbose) conv.recorder().subscribe(print_event);

    auto one = [&](const std::string& q) {
        try {
            const auto r = conv.run_turn(q);
            if (r.last_plot) save_plot(g, *r.last_plot);
            std::cout << r.final_answer << '\n';
            if (r.artifact) std::cout << "(written to " << r.artifact->string() << ")\n";
            return true;
        } catch (const agents::TurnAborted& e) {
            std::cerr << "turn aborted: " << e.what() << '\n';
            return false;
        }
    };

    if (!repl) return one(queries.front()) ? 0 : 1;
    std::string line;
    while (true) {
        std::cout << "> " << std::flush;
        if (!std::getline(std::cin, line)) break;
        if (line == "exit" || line == "quit") break;
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        one(line);
    }
    return 0;
}

eval::BackendFactory eval_backend(const std::string& kind) {
    if (kind == "http") {
        return [](const eval::Scenario&) -> std::unique_ptr<llm::Backend> {
            return std::make_unique<llm::HttpBackend>(llm::HttpBackendConfig::from_env());
        };
    }
    return eval::scripted_backend_factory();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"agentctl: multi-agent assistant for linear control problems"};
    app.require_subcommand(1);
    app.fallthrough();
    Globals g;
    app.add_option("--home", g.home, "State directory (default $AGENTCTL_HOME or ./.agentctl)");
    app.add_option("--backend", g.backend, "Completion backend")->check(CLI::IsMember({"scripted", "http"}));
    app.add_option("--script", g.script, "Script file for the scripted backend")->check(CLI::ExistingFile);
    app.add_option("--search-fixtures", g.search, "Offline search results")->check(CLI::ExistingFile);
    app.add_option("--critic-threshold", g.critic_threshold, "Critic acceptance threshold")->check(CLI::Range(0.0, 1.0));
    app.add_flag("-v,--verbose", g.verbose, "Print trace events to stderr");

    auto* chat = app.add_subcommand("chat", "Interactive session");

    std::string query;
    auto* ask = app.add_subcommand("ask", "Answer one question");
    ask->add_option("query", query, "Question")->required();

    std::string scenarios, report = "text", eval_out;
    int runs = 20;
    auto* ev = app.add_subcommand("eval", "Run the evaluation harness");
    ev->add_option("--scenarios", scenarios, "Scenario file or directory")->required();
    ev->add_option("--runs", runs, "Repetitions per scenario")->check(CLI::PositiveNumber);
    ev->add_option("--report", report, "Report format")->check(CLI::IsMember({"text", "csv", "chartdata"}));
    ev->add_option("--out", eval_out, "Write the report to a file");
    std::string traces_dir;
    ev->add_option("--traces", traces_dir, "Write every run trace as JSON lines into this directory");

    std::string plot_out;
    auto* plot = app.add_subcommand("plot", "Export the last plot (.svg renders, anything else is JSON)");
    plot->add_option("--out", plot_out, "Output file")->required();

    auto* corpus = app.add_subcommand("corpus", "Manage ingested documents");
    corpus->require_subcommand(1);
    std::string corpus_path;
    auto* corpus_add = corpus->add_subcommand("add", "Ingest a file or directory");
    corpus_add->add_option("path", corpus_path, "File or directory")->required()->check(CLI::ExistingPath);
    auto* corpus_list = corpus->add_subcommand("list", "List ingested documents");

    std::string host = "127.0.0.1";
    int port = 8080;
    auto* serve = app.add_subcommand("serve", "Run the HTTP service");
    serve->add_option("--host", host, "Bind address");
    serve->add_option("--port", port, "Port")->check(CLI::Range(1, 65535));

    CLI11_PARSE(app, argc, argv);

    try {
        if (*chat) return run_turns(g, {}, true);
        if (*ask) return run_turns(g, {query}, false);

        if (*ev) {
            const auto set = eval::load_scenario_set(scenarios);
            eval::EvalOptions opts;
            opts.runs = runs;
            opts.config = graph_config(g);
            opts.config.output_dir.clear();
            opts.backend = eval_backend(g.backend);
            if (!traces_dir.empty()) fs::create_directories(traces_dir);
            if (g.verbose || !traces_dir.empty()) {
                opts.on_run = [&g, &set, traces_dir](const eval::RunRecord& r) {
                    if (!traces_dir.empty()) {
                        const std::string name = r.scenario_id + "-r" + std::to_string(r.repetition + 1) + "-t" +
                                                 std::to_string(r.turn + 1) + ".jsonl";
                        std::ofstream(fs::path(traces_dir) / name) << trace::to_jsonl(r.trace);
                    }
                    if (!g.verbose) return;
                    std::cerr << r.scenario_id << " #" << r.repetition + 1 << "." << r.turn + 1 << ": ";
                    for (std::size_t i = 0; i < r.path.size(); ++i) std::cerr << (i ? " > " : "") << r.path[i];
                    if (r.error) std::cerr << " [" << r.error_message << "]";
                    for (const auto& s : set) {
                        if (s.id != r.scenario_id || r.turn >= s.turns.size()) continue;
                        if (auto f = metrics::root_failure(r.trace, s.turns[r.turn].truth)) {
                            std::cerr << " <" << metrics::to_string(*f) << ">";
                        }
                    }
                    std::cerr << '\n';
                };
            }
            const auto reports = eval::evaluate_all(set, opts);
            const std::string text = eval::render_report(reports, *eval::report_format_from_string(report));
            if (eval_out.empty()) {
                std::cout << text;
            } else {
                std::ofstream(eval_out) << text;
            }
            return 0;
        }

        if (*plot) {
            if (!fs::exists(plot_file(g))) {
                std::cerr << "no plot yet; run a query that simulates or plots a system first\n";
                return 1;
            }
            const auto payload = nlohmann::json::parse(read_text(plot_file(g)));
            agents::validate_plot_payload(payload);
            std::ofstream out(plot_out);
            if (fs::path(plot_out).extension() == ".svg") {
                out << agents::render_svg(payload);
            } else {
                out << payload.dump(2) << '\n';
            }
            if (!out) throw Error(ErrorCode::ValidationError, "cannot write " + plot_out);
            return 0;
        }

        if (*corpus_add) {
            // parse before copying so a bad file never lands in the corpus
            const auto probe = tools::ingest_corpus({corpus_path});
            fs::create_directories(corpus_dir(g));
            const fs::path src(corpus_path);
            const fs::path dst = corpus_dir(g) / src.filename();
            fs::copy(src, dst, fs::copy_options::recursive | fs::copy_options::overwrite_existing);
            std::cout << "added " << probe.documents().size() << " document(s), " << probe.chunks().size()
                      << " chunk(s) from " << corpus_path << '\n';
            return 0;
        }
        if (*corpus_list) {
            const auto index = load_corpus(g);
            if (!index) {
                std::cout << "corpus is empty\n";
                return 0;
            }
            for (const auto& d : index->documents()) std::cout << d.id << "  " << d.text.size() << " chars\n";
            return 0;
        }

        if (*serve) {
            service::ServiceConfig sc;
            sc.graph = graph_config(g);
            fs::create_directories(sc.graph.output_dir);
            sc.backend = [g] { return make_backend(g); };
            fs::create_directories(home_dir(g));
            sc.memory = std::make_shared<tools::FileMemoryStore>(home_dir(g) / "memory.log");
            sc.corpus = load_corpus(g);
            sc.search = load_search(g);
            service::SessionService svc(sc);
            service::ApiOptions api;
            api.eval.config = sc.graph;
            api.eval.config.output_dir.clear();
            api.eval.backend = eval_backend(g.backend);
            httplib::Server server;
            service::install_routes(server, svc, api);
            std::cout << "listening on http://" << host << ":" << port << std::endl;
            if (!server.listen(host, port)) {
                std::cerr << "cannot bind " << host << ":" << port << '\n';
                return 1;
            }
            return 0;
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
