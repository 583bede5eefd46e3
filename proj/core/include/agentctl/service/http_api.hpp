#pragma once

#include <string>

#include "agentctl/eval/harness.hpp"
#include "agentctl/service/session_service.hpp"
#include "agentctl/trace/event.hpp"

namespace httplib {
class Server;
}

namespace agentctl::service {

// "id: <seq>\nevent: <kind>\ndata: <json>\n\n"
std::string sse_frame(const trace::Event& event);

// HTTP status for a library error.
int http_status(ErrorCode code) noexcept;

struct ApiOptions {
    // Options for POST /eval; its backend factory defaults to scripted.
    eval::EvalOptions eval;
    // Cap on runs requested through POST /eval.
    int max_eval_runs = 50;
};

//   POST /sessions                 {overrides?}        -> 201 {"session_id"}
//   POST /sessions/{id}/messages   {"text"}            -> text/event-stream until the turn ends
//   POST /sessions/{id}/answers    {"reply"}           -> {"ok": true}
//   GET  /sessions/{id}/trace                          -> application/x-ndjson
//   GET  /sessions/{id}/events?after=N                 -> text/event-stream of stored events
//   GET  /sessions/{id}                                -> session status
//   POST /eval  {"scenarios": [...] | "path", "runs", "report"} -> report
//   GET  /health
// Errors are {"error": "<Code>", "message": "..."}.
void install_routes(httplib::Server& server, SessionService& service, ApiOptions options = {});

}  // namespace agentctl::service
