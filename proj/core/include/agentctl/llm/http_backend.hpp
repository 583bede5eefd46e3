#pragma once

#include <chrono>
#include <string>

#include "agentctl/llm/backend.hpp"
#include "agentctl/llm/pricing.hpp"

namespace agentctl::llm {

struct HttpBackendConfig {
    // Base URL such as "https://api.openai.com/v1"; "/chat/completions" is
    // appended unless already present.
    std::string url;
    std::string api_key;
    std::string model = "gpt-3.5-turbo";
    std::chrono::milliseconds timeout{60'000};
    int max_retries = 2;
    std::chrono::milliseconds backoff{500};

    // AGENTCTL_LLM_URL, AGENTCTL_LLM_KEY, AGENTCTL_MODEL.
    static HttpBackendConfig from_env();
};

// OpenAI-compatible chat-completions client. 5xx, 429 and transport failures
// are retried max_retries times with doubling backoff.
//   BackendAuthError  no key configured, or HTTP 401/403
//   BackendError      other 4xx, malformed body, or retries exhausted
class HttpBackend : public Backend {
public:
    explicit HttpBackend(HttpBackendConfig config, PriceTable prices = PriceTable::presets());

    Completion complete(const CompletionRequest& request) override;
    std::string_view name() const noexcept override { return "http"; }

    const HttpBackendConfig& config() const noexcept { return config_; }

private:
    HttpBackendConfig config_;
    PriceTable prices_;
};

}  // namespace agentctl::llm
