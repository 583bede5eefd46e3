#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "agentctl/agents/graph.hpp"
#include "agentctl/llm/backend.hpp"
#include "agentctl/tools/corpus.hpp"
#include "agentctl/tools/human.hpp"
#include "agentctl/tools/memory.hpp"
#include "agentctl/tools/search.hpp"
#include "agentctl/trace/event.hpp"

namespace agentctl::service {

struct ServiceConfig {
    agents::GraphConfig graph;
    // Called once per session.
    std::function<std::unique_ptr<llm::Backend>()> backend;
    std::shared_ptr<tools::MemoryStore> memory;
    std::shared_ptr<const tools::CorpusIndex> corpus;
    std::shared_ptr<tools::SearchClient> search;
    const agents::PromptLibrary* prompts = nullptr;
    std::chrono::milliseconds human_timeout = tools::kDefaultHumanTimeout;
};

// Applies {"critic_threshold", "recall_threshold", "max_steps", "max_inner",
// "max_revisions", "temperature", "model_name", "max_output_tokens"} to a copy
// of base. ValidationError on unknown keys, wrong types or invalid values.
agents::GraphConfig apply_overrides(const agents::GraphConfig& base, const nlohmann::json& overrides);

struct TurnStatus {
    bool running = false;
    std::uint64_t first_seq = 0;
    std::uint64_t last_seq = 0;
    std::optional<std::string> final_answer;
    std::optional<std::string> error;
};

// Sessions, each owning one Conversation. A turn runs on its own thread and
// publishes events through the session recorder.
//   NotFound         unknown session id
//   Busy             a turn is already in flight
//   NoQuestion       answer() without a pending question
//   ValidationError  bad overrides or an empty message
class SessionService {
public:
    explicit SessionService(ServiceConfig config);
    ~SessionService();
    SessionService(const SessionService&) = delete;
    SessionService& operator=(const SessionService&) = delete;

    std::string create_session(const nlohmann::json& overrides = nlohmann::json::object());

    // Starts a turn and returns the last sequence number before it.
    std::uint64_t post_message(const std::string& session_id, const std::string& text);
    void answer(const std::string& session_id, const std::string& reply);

    std::vector<trace::Event> trace(const std::string& session_id) const;
    std::vector<trace::Event> events_after(const std::string& session_id, std::uint64_t seq) const;

    // Blocks until events after `seq` exist, the current turn has ended, or
    // the timeout elapses. Returns the new events and whether the turn is over.
    std::pair<std::vector<trace::Event>, bool> wait_events(const std::string& session_id, std::uint64_t seq,
                                                           std::chrono::milliseconds timeout) const;

    TurnStatus status(const std::string& session_id) const;
    std::optional<std::string> pending_question(const std::string& session_id) const;
    const agents::GraphConfig& session_config(const std::string& session_id) const;
    std::optional<nlohmann::json> last_plot(const std::string& session_id) const;

    // Waits for the in-flight turn, if any.
    void join(const std::string& session_id);
    std::size_t session_count() const;

    const ServiceConfig& config() const noexcept { return config_; }

private:
    struct Session;
    std::shared_ptr<Session> find(const std::string& session_id) const;

    ServiceConfig config_;
    mutable std::mutex mutex_;
    std::map<std::string, std::shared_ptr<Session>> sessions_;
    std::uint64_t next_id_ = 1;
};

}  // namespace agentctl::service
