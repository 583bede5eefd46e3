#include "agentctl/llm/http_backend.hpp"

#include <cstdlib>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "agentctl/error.hpp"

namespace agentctl::llm {

namespace {

struct Endpoint {
    std::string origin;  // scheme://host[:port]
    std::string path;
};

Endpoint split_url(const std::string& url) {
    const auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) throw Error(ErrorCode::BackendError, "endpoint URL lacks a scheme: " + url);
    const auto path_start = url.find('/', scheme_end + 3);
    Endpoint e;
    e.origin = url.substr(0, path_start);
    e.path = path_start == std::string::npos ? "" : url.substr(path_start);
    while (!e.path.empty() && e.path.back() == '/') e.path.pop_back();
    if (!e.path.ends_with("/chat/completions")) e.path += "/chat/completions";
    return e;
}

std::string env_or(const char* name, std::string fallback) {
    const char* v = std::getenv(name);
    return v && *v ? std::string(v) : fallback;
}

bool retryable(int status) { return status >= 500 || status == 429; }

}  // namespace

HttpBackendConfig HttpBackendConfig::from_env() {
    HttpBackendConfig c;
    c.url = env_or("AGENTCTL_LLM_URL", "https://api.openai.com/v1");
    c.api_key = env_or("AGENTCTL_LLM_KEY", "");
    c.model = env_or("AGENTCTL_MODEL", c.model);
    return c;
}

HttpBackend::HttpBackend(HttpBackendConfig config, PriceTable prices)
    : config_(std::move(config)), prices_(std::move(prices)) {}

Completion HttpBackend::complete(const CompletionRequest& request) {
    validate(request);
    if (config_.api_key.empty()) throw Error(ErrorCode::BackendAuthError, "no API key configured (AGENTCTL_LLM_KEY)");
    const Endpoint ep = split_url(config_.url);
    const std::string model = request.model_name.empty() ? config_.model : request.model_name;

    const nlohmann::json body = {
        {"model", model},
        {"temperature", request.temperature},
        {"max_tokens", request.max_output_tokens},
        {"messages",
         {{{"role", "system"}, {"content", request.system_text}}, {{"role", "user"}, {"content", request.user_text}}}},
    };
    const std::string payload = body.dump();

    httplib::Client client(ep.origin);
    const auto secs = std::chrono::duration_cast<std::chrono::seconds>(config_.timeout);
    const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(config_.timeout - secs);
    client.set_connection_timeout(secs.count(), usecs.count());
    client.set_read_timeout(secs.count(), usecs.count());
    client.set_write_timeout(secs.count(), usecs.count());
    const httplib::Headers headers{{"Authorization", "Bearer " + config_.api_key}};

    const auto start = std::chrono::steady_clock::now();
    std::string last_failure;
    for (int attempt = 0; attempt <= config_.max_retries; ++attempt) {
        if (attempt > 0) std::this_thread::sleep_for(config_.backoff * (1 << (attempt - 1)));
        auto res = client.Post(ep.path, headers, payload, "application/json");
        if (!res) {
            last_failure = "transport failure: " + httplib::to_string(res.error());
            continue;
        }
        if (res->status == 401 || res->status == 403) {
            throw Error(ErrorCode::BackendAuthError, "endpoint rejected credentials (HTTP " + std::to_string(res->status) + ")");
        }
        if (retryable(res->status)) {
            last_failure = "HTTP " + std::to_string(res->status);
            continue;
        }
        if (res->status < 200 || res->status >= 300) {
            throw Error(ErrorCode::BackendError, "HTTP " + std::to_string(res->status) + ": " + res->body.substr(0, 200));
        }

        Completion out;
        try {
            const auto j = nlohmann::json::parse(res->body);
            out.text = j.at("choices").at(0).at("message").at("content").get<std::string>();
            if (j.contains("usage") && j["usage"].is_object()) {
                out.usage.prompt_tokens = j["usage"].value("prompt_tokens", std::int64_t{0});
                out.usage.completion_tokens = j["usage"].value("completion_tokens", std::int64_t{0});
            } else {
                out.usage.prompt_tokens = estimate_tokens(request.system_text) + estimate_tokens(request.user_text);
                out.usage.completion_tokens = estimate_tokens(out.text);
            }
        } catch (const nlohmann::json::exception& ex) {
            throw Error(ErrorCode::BackendError, std::string("malformed completion body: ") + ex.what());
        }
        out.usage.estimated_cost = prices_.cost(model, out.usage.prompt_tokens, out.usage.completion_tokens);
        out.usage.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        return out;
    }
    throw Error(ErrorCode::BackendError, "gave up after " + std::to_string(config_.max_retries + 1) +
                                             " attempts, last: " + last_failure);
}

}  // namespace agentctl::llm
