#pragma once

#include <chrono>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "agentctl/agents/plot.hpp"
#include "agentctl/agents/prompts.hpp"
#include "agentctl/agents/registry.hpp"
#include "agentctl/error.hpp"
#include "agentctl/llm/backend.hpp"
#include "agentctl/tools/corpus.hpp"
#include "agentctl/tools/critic.hpp"
#include "agentctl/tools/human.hpp"
#include "agentctl/tools/memory.hpp"
#include "agentctl/tools/search.hpp"
#include "agentctl/trace/recorder.hpp"

namespace agentctl::agents {

enum class Node {
    Supervisor,
    Planner,
    Retriever,
    Researcher,
    Reasoner,
    Controller,
    Critic,
    Debugger,
    Memory,
    Communicator,
};

inline constexpr std::string_view kEnd = "END";

std::string_view to_string(Node node) noexcept;
// Case-insensitive.
std::optional<Node> node_from_string(std::string_view name) noexcept;

struct AgentNodeSpec {
    Node name;
    // Prompt asset stem, e.g. "controller".
    std::string prompt;
    std::vector<std::string> tool_ids;
    bool conditional = false;
    // Empty for a node that ends the run (Communicator).
    std::vector<Node> successors;
};

const std::vector<AgentNodeSpec>& node_specs();
const AgentNodeSpec& node_spec(Node node);

enum class Role { User, Agent, Tool, System };
std::string_view to_string(Role role) noexcept;

struct Message {
    Role role = Role::User;
    // Node name for agent messages, tool id for tool messages.
    std::string agent_name;
    std::string content;
    // Seconds since the conversation started.
    double timestamp = 0.0;
};

struct ConversationState {
    std::string session_id;
    std::vector<Message> message_list;
    std::string current_node;
    // Backend completions in the current turn.
    int step_count = 0;
    std::optional<std::string> pending_question;
};

struct GraphConfig {
    int max_steps = 40;
    int max_inner = 8;
    int max_revisions = 2;
    double critic_threshold = tools::kDefaultCriticThreshold;
    double recall_threshold = tools::kDefaultRecallThreshold;
    std::string model_name = "gpt-3.5-turbo";
    double temperature = 0.0;
    int max_output_tokens = 1024;
    std::size_t retrieve_k = 3;
    // PDFs are written here; when empty they are rendered in memory only.
    std::filesystem::path output_dir;
};

// ValidationError for nonpositive bounds or thresholds outside [0, 1].
void validate(const GraphConfig& config);

struct Resources {
    llm::Backend* backend = nullptr;
    // A private in-memory store is created when null.
    std::shared_ptr<tools::MemoryStore> memory;
    std::shared_ptr<const tools::CorpusIndex> corpus;
    std::shared_ptr<tools::SearchClient> search;
    std::shared_ptr<tools::HumanChannel> human;
    // Builtin prompts when null.
    const PromptLibrary* prompts = nullptr;
};

struct TurnResult {
    std::string final_answer;
    trace::RunTrace trace;
    // Node names in invocation order.
    std::vector<std::string> path;
    std::optional<PlotPayload> last_plot;
    // Written PDF, if any.
    std::optional<std::filesystem::path> artifact;
};

// A turn that ended in RunAborted or a backend failure. The events recorded
// up to that point, closed by an error event, travel with it.
class TurnAborted : public Error {
public:
    TurnAborted(const Error& cause, trace::RunTrace trace, std::vector<std::string> path);
    const trace::RunTrace& trace() const noexcept { return trace_; }
    const std::vector<std::string>& path() const noexcept { return path_; }

private:
    trace::RunTrace trace_;
    std::vector<std::string> path_;
};

// One session: message list, object registry and event recorder persist
// across turns. Turns run one at a time.
class Conversation {
public:
    Conversation(std::string session_id, Resources resources, GraphConfig config = {});
    ~Conversation();
    Conversation(const Conversation&) = delete;
    Conversation& operator=(const Conversation&) = delete;

    // Runs the graph from the Supervisor until END. Throws TurnAborted.
    TurnResult run_turn(std::string_view query);

    const ConversationState& state() const noexcept;
    trace::Recorder& recorder() noexcept;
    const SystemRegistry& registry() const noexcept;
    const GraphConfig& config() const noexcept;
    tools::MemoryStore& memory() noexcept;
    std::size_t turns() const noexcept;

    struct Impl;

private:
    std::unique_ptr<Impl> impl_;
};

// Single-turn convenience over a fresh Conversation.
TurnResult run_conversation(std::string_view query, Resources resources, GraphConfig config = {});

}  // namespace agentctl::agents
