#include "agentctl/service/http_api.hpp"

#include <httplib.h>

#include "agentctl/error.hpp"
#include "agentctl/eval/report.hpp"
#include "agentctl/eval/scenario.hpp"

namespace agentctl::service {

namespace {

using nlohmann::json;

void send_json(httplib::Response& res, int status, const json& body) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, const Error& e) {
    send_json(res, http_status(e.code()), {{"error", std::string(to_string(e.code()))}, {"message", e.detail()}});
}

json parse_body(const httplib::Request& req, bool allow_empty) {
    if (req.body.empty() && allow_empty) return json::object();
    try {
        json j = json::parse(req.body);
        if (!j.is_object()) throw Error(ErrorCode::ValidationError, "request body must be a JSON object");
        return j;
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::ValidationError, std::string("request body is not JSON: ") + e.what());
    }
}

std::string string_field(const json& body, const char* key) {
    auto it = body.find(key);
    if (it == body.end() || !it->is_string()) {
        throw Error(ErrorCode::ValidationError, std::string("field '") + key + "' must be a string");
    }
    return it->get<std::string>();
}

// Runs a handler, mapping library errors onto JSON error responses.
template <typename F>
httplib::Server::Handler guarded(F f) {
    return [f](const httplib::Request& req, httplib::Response& res) {
        try {
            f(req, res);
        } catch (const Error& e) {
            send_error(res, e);
        } catch (const std::exception& e) {
            send_json(res, 500, {{"error", "Internal"}, {"message", e.what()}});
        }
    };
}

json report_json(const eval::CategoryReport& r) {
    json scores = json::object();
    for (auto k : metrics::kAllKinds) {
        const auto v = r.metrics.get(k);
        scores["M_" + std::string(metrics::to_string(k))] = v ? json(*v) : json(nullptr);
    }
    return {{"name", r.name},          {"scores", scores},         {"runs", r.runs},
            {"scenarios", r.scenarios}, {"aborted", r.aborted},     {"wall_seconds", r.metrics.wall_seconds},
            {"cost", r.metrics.cost},   {"tokens", r.metrics.tokens}};
}

// Streams session events after `from` until the turn has ended.
void stream_events(httplib::Response& res, SessionService& service, const std::string& id, std::uint64_t from,
                   bool follow) {
    auto cursor = std::make_shared<std::uint64_t>(from);
    res.set_header("Cache-Control", "no-cache");
    res.set_chunked_content_provider(
        "text/event-stream", [&service, id, cursor, follow](std::size_t, httplib::DataSink& sink) {
            try {
                auto [events, over] = follow ? service.wait_events(id, *cursor, std::chrono::milliseconds(500))
                                             : std::pair{service.events_after(id, *cursor), true};
                for (const auto& e : events) {
                    const std::string frame = sse_frame(e);
                    if (!sink.write(frame.data(), frame.size())) return false;
                    *cursor = e.seq;
                }
                if (over) {
                    sink.done();
                } else if (events.empty()) {
                    // keeps idle connections alive while a question is pending
                    static const std::string ping = ": ping\n\n";
                    if (!sink.write(ping.data(), ping.size())) return false;
                }
                return true;
            } catch (const Error&) {
                sink.done();
                return true;
            }
        });
}

}  // namespace

std::string sse_frame(const trace::Event& event) {
    std::string out = "id: " + std::to_string(event.seq) + "\n";
    out += "event: " + std::string(trace::to_string(event.kind)) + "\n";
    out += "data: " + trace::to_json(event).dump() + "\n\n";
    return out;
}

int http_status(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::NotFound: return 404;
        case ErrorCode::Busy:
        case ErrorCode::NoQuestion: return 409;
        case ErrorCode::ValidationError:
        case ErrorCode::ScenarioError:
        case ErrorCode::EmptyEvaluation: return 400;
        case ErrorCode::BackendAuthError: return 502;
        case ErrorCode::BackendError: return 502;
        default: return 500;
    }
}

void install_routes(httplib::Server& server, SessionService& service, ApiOptions options) {
    server.Get("/health", [](const httplib::Request&, httplib::Response& res) { send_json(res, 200, {{"ok", true}}); });

    server.Post("/sessions", guarded([&service](const httplib::Request& req, httplib::Response& res) {
                    const json body = parse_body(req, true);
                    json overrides = body.contains("overrides") ? body["overrides"] : body;
                    const std::string id = service.create_session(overrides);
                    const auto& c = service.session_config(id);
                    send_json(res, 201,
                              {{"session_id", id},
                               {"config",
                                {{"critic_threshold", c.critic_threshold},
                                 {"recall_threshold", c.recall_threshold},
                                 {"max_steps", c.max_steps},
                                 {"max_revisions", c.max_revisions},
                                 {"model_name", c.model_name}}}});
                }));

    server.Get(R"(/sessions/([^/]+))", guarded([&service](const httplib::Request& req, httplib::Response& res) {
                   const std::string id = req.matches[1];
                   const TurnStatus st = service.status(id);
                   const auto q = service.pending_question(id);
                   send_json(res, 200,
                             {{"session_id", id},
                              {"running", st.running},
                              {"last_seq", service.trace(id).empty() ? 0 : service.trace(id).back().seq},
                              {"pending_question", q ? json(*q) : json(nullptr)}});
               }));

    server.Post(R"(/sessions/([^/]+)/messages)",
                guarded([&service](const httplib::Request& req, httplib::Response& res) {
                    const std::string id = req.matches[1];
                    const json body = parse_body(req, false);
                    const std::uint64_t from = service.post_message(id, string_field(body, "text"));
                    stream_events(res, service, id, from, true);
                }));

    server.Post(R"(/sessions/([^/]+)/answers)",
                guarded([&service](const httplib::Request& req, httplib::Response& res) {
                    const json body = parse_body(req, false);
                    service.answer(req.matches[1], string_field(body, "reply"));
                    send_json(res, 200, {{"ok", true}});
                }));

    server.Get(R"(/sessions/([^/]+)/trace)", guarded([&service](const httplib::Request& req, httplib::Response& res) {
                   res.set_content(trace::to_jsonl(service.trace(req.matches[1])), "application/x-ndjson");
               }));

    server.Get(R"(/sessions/([^/]+)/events)",
               guarded([&service](const httplib::Request& req, httplib::Response& res) {
                   const std::string id = req.matches[1];
                   std::uint64_t after = 0;
                   if (req.has_param("after")) {
                       try {
                           after = std::stoull(req.get_param_value("after"));
                       } catch (const std::exception&) {
                           throw Error(ErrorCode::ValidationError, "'after' must be a sequence number");
                       }
                   }
                   const bool follow = req.has_param("follow") && req.get_param_value("follow") != "0";
                   service.status(id);
                   stream_events(res, service, id, after, follow);
               }));

    server.Post("/eval", guarded([options](const httplib::Request& req, httplib::Response& res) {
                    const json body = parse_body(req, false);
                    std::vector<eval::Scenario> scenarios;
                    if (body.contains("path")) {
                        scenarios = eval::load_scenario_set(string_field(body, "path"));
                    } else if (body.contains("scenarios")) {
                        scenarios = eval::parse_scenarios({{"scenarios", body["scenarios"]}});
                    } else {
                        throw Error(ErrorCode::ValidationError, "give 'scenarios' or 'path'");
                    }
                    eval::EvalOptions opts = options.eval;
                    if (body.contains("runs")) {
                        if (!body["runs"].is_number_integer()) throw Error(ErrorCode::ValidationError, "'runs' must be an integer");
                        opts.runs = body["runs"].get<int>();
                    }
                    if (opts.runs < 1 || opts.runs > options.max_eval_runs) {
                        throw Error(ErrorCode::ValidationError,
                                    "'runs' must lie in [1, " + std::to_string(options.max_eval_runs) + "]");
                    }
                    const auto reports = eval::evaluate_all(scenarios, opts);
                    json out = {{"reports", json::array()}};
                    for (const auto& r : reports) out["reports"].push_back(report_json(r));
                    if (body.contains("report")) {
                        const auto fmt = eval::report_format_from_string(string_field(body, "report"));
                        if (!fmt) throw Error(ErrorCode::ValidationError, "'report' must be text, csv or chartdata");
                        const std::string rendered = eval::render_report(reports, *fmt);
                        out["report"] = *fmt == eval::ReportFormat::ChartData ? json::parse(rendered) : json(rendered);
                    }
                    send_json(res, 200, out);
                }));
}

}  // namespace agentctl::service
