#include "agentctl/agents/graph.hpp"

#include <algorithm>
#include <cctype>
#include <ctime>
#include <map>
#include <set>

#include "agentctl/agents/planner.hpp"
#include "agentctl/agents/react.hpp"
#include "agentctl/agents/toolbox.hpp"
#include "agentctl/llm/meter.hpp"
#include "agentctl/metrics/events.hpp"
#include "agentctl/tools/debug.hpp"
#include "agentctl/tools/delivery.hpp"
#include "agentctl/tools/pdf_writer.hpp"
#include "agentctl/tools/reason.hpp"
#include "agentctl/tools/retriever.hpp"

namespace agentctl::agents {

namespace ev = metrics::events;
using trace::EventKind;
using trace::Json;

namespace {

constexpr std::string_view kNodeNames[] = {"Supervisor", "Planner", "Retriever", "Researcher", "Reasoner",
                                           "Controller", "Critic",  "Debugger",  "Memory",     "Communicator"};

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
    return out;
}

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> control_ids() {
    std::vector<std::string> ids;
    for (const auto& t : control_tools()) ids.push_back(t.id);
    return ids;
}

const std::map<std::string, std::string>& aux_descriptions() {
    static const std::map<std::string, std::string> d = {
        {"planner_tool", "Classifies the control objective and returns the ordered control tools."},
        {"retriever_tool", "Searches the ingested documents and returns the most relevant passages."},
        {"search_tool", "Searches external sources and returns snippets with their sources."},
        {"cot_tool", "Chain-of-thought reasoning in numbered steps."},
        {"tot_tool", "Tree-of-thought reasoning over three candidate paths, then picks the best."},
        {"critic_tool", "Scores how well the answer aligns with the question."},
        {"debugger_tool", "Explains an error message and suggests a fix."},
        {"storage_memory_tool", "Stores the conversation for future recall."},
        {"recall_memory_tool", "Recalls a stored conversation related to the question."},
        {"human_tool", "Asks the user a question and returns the reply."},
        {"text_to_pdf_tool", "Renders the answer into a PDF document."},
        {"speech_tool", "Reads the answer aloud (not available)."},
        {"translation_tool", "Translates the answer (not available)."},
    };
    return d;
}

std::string describe(const std::vector<std::string>& ids) {
    std::string out;
    for (const auto& id : ids) {
        if (!out.empty()) out += '\n';
        if (auto it = aux_descriptions().find(id); it != aux_descriptions().end()) {
            out += id + ": " + it->second;
        } else if (const ToolSpec* t = find_control_tool(id)) {
            out += t->id + "(" + t->usage + "): " + t->description;
        }
    }
    return out;
}

std::string requested_mode(std::string_view text) {
    const std::string t = lower(text);
    if (t.find("pdf") != std::string::npos) return "pdf";
    if (t.find("speech") != std::string::npos || t.find("audio") != std::string::npos) return "speech";
    if (t.find("translat") != std::string::npos) return "translation";
    return "text";
}

// "<Route to Retriever>", "retriever", "Retriever." all name Retriever.
std::optional<Node> parse_route(std::string_view reply, const std::vector<Node>& allowed) {
    std::string t = trim(reply);
    if (t.starts_with("<") && t.ends_with(">")) t = trim(std::string_view(t).substr(1, t.size() - 2));
    const std::string lt = lower(t);
    std::string name = lt.starts_with("route to") ? trim(std::string_view(t).substr(8)) : t;
    while (!name.empty() && std::string_view("*'\".:`").find(name.back()) != std::string_view::npos) name.pop_back();
    while (!name.empty() && std::string_view("*'\"`").find(name.front()) != std::string_view::npos) name.erase(0, 1);
    if (auto n = node_from_string(name); n && std::find(allowed.begin(), allowed.end(), *n) != allowed.end()) {
        return n;
    }
    // a single allowed name anywhere in the reply
    std::optional<Node> found;
    for (Node n : allowed) {
        const std::string key = lower(to_string(n));
        std::size_t pos = 0;
        while ((pos = lt.find(key, pos)) != std::string::npos) {
            const bool left = pos == 0 || !std::isalpha(static_cast<unsigned char>(lt[pos - 1]));
            const bool right = pos + key.size() >= lt.size() || !std::isalpha(static_cast<unsigned char>(lt[pos + key.size()]));
            if (left && right) {
                if (found && *found != n) return std::nullopt;
                found = n;
                break;
            }
            pos += key.size();
        }
    }
    return found;
}

}  // namespace

std::string_view to_string(Node node) noexcept { return kNodeNames[static_cast<int>(node)]; }

std::optional<Node> node_from_string(std::string_view name) noexcept {
    const std::string l = lower(trim(name));
    for (int i = 0; i < 10; ++i) {
        if (lower(kNodeNames[i]) == l) return static_cast<Node>(i);
    }
    return std::nullopt;
}

std::string_view to_string(Role role) noexcept {
    switch (role) {
        case Role::User: return "user";
        case Role::Agent: return "agent";
        case Role::Tool: return "tool";
        case Role::System: return "system";
    }
    return "user";
}

const std::vector<AgentNodeSpec>& node_specs() {
    using N = Node;
    static const std::vector<AgentNodeSpec> specs = {
        {N::Supervisor, "supervisor", {}, true, {N::Memory, N::Planner, N::Retriever, N::Researcher, N::Reasoner}},
        {N::Planner, "planner", {"planner_tool"}, false, {N::Controller}},
        {N::Retriever, "retriever", {"retriever_tool"}, false, {N::Planner}},
        {N::Researcher, "researcher", {"search_tool"}, false, {N::Planner}},
        {N::Reasoner, "reasoner", {"cot_tool", "tot_tool"}, false, {N::Planner}},
        {N::Controller, "controller", control_ids(), false, {N::Critic}},
        {N::Critic, "critic", {"critic_tool"}, true, {N::Memory, N::Controller}},
        {N::Debugger, "debugger", {"debugger_tool"}, false, {N::Controller}},
        {N::Memory, "memory", {"storage_memory_tool", "recall_memory_tool"}, true, {N::Communicator, N::Supervisor}},
        {N::Communicator,
         "communicator",
         {"human_tool", "text_to_pdf_tool", "speech_tool", "translation_tool"},
         false,
         {}},
    };
    return specs;
}

const AgentNodeSpec& node_spec(Node node) { return node_specs().at(static_cast<std::size_t>(node)); }

void validate(const GraphConfig& c) {
    auto fail = [](const std::string& what) { throw Error(ErrorCode::ValidationError, what); };
    if (c.max_steps < 1) fail("max_steps must be at least 1");
    if (c.max_inner < 1) fail("max_inner must be at least 1");
    if (c.max_revisions < 0) fail("max_revisions must be nonnegative");
    if (!(c.critic_threshold >= 0.0 && c.critic_threshold <= 1.0)) fail("critic_threshold must lie in [0, 1]");
    if (!(c.recall_threshold >= 0.0 && c.recall_threshold <= 1.0)) fail("recall_threshold must lie in [0, 1]");
    if (!(c.temperature >= 0.0 && c.temperature <= 2.0)) fail("temperature must lie in [0, 2]");
    if (c.max_output_tokens < 1) fail("max_output_tokens must be positive");
    if (c.retrieve_k < 1) fail("retrieve_k must be positive");
}

TurnAborted::TurnAborted(const Error& cause, trace::RunTrace trace, std::vector<std::string> path)
    : Error(cause.code(), cause.detail()), trace_(std::move(trace)), path_(std::move(path)) {}

struct Conversation::Impl {
    Resources res;
    GraphConfig config;
    ConversationState state;
    SystemRegistry registry;
    trace::Recorder recorder;
    std::shared_ptr<tools::MemoryStore> memory;
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    std::size_t turns = 0;

    const PromptLibrary& prompts() const { return res.prompts ? *res.prompts : PromptLibrary::builtin(); }
    double now() const { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(); }
    void add_message(Role role, std::string agent, std::string content) {
        if (trim(content).empty()) content = "(empty)";
        state.message_list.push_back({role, std::move(agent), std::move(content), now()});
    }
};

namespace {

enum class MemoryMode { Store, Recall };

struct PendingDebug {
    std::string error_class;
    bool detected = false;
    std::string advice;
};

struct NodeOutcome {
    std::string output;
    std::optional<Node> next;
    Json extra = Json::object();
};

class TurnRunner {
public:
    TurnRunner(Conversation::Impl& c, std::string query) : c_(c), query_(std::move(query)) {}

    TurnResult run();
    const std::vector<std::string>& path() const { return path_; }

private:
    Conversation::Impl& c_;
    std::string query_;
    std::size_t first_message_ = 0;
    std::map<std::string, int> node_steps_;
    std::vector<std::string> path_;

    std::string controller_answer_;
    std::optional<std::string> recalled_answer_;
    std::optional<tools::CriticVerdict> verdict_;
    int rejections_ = 0;
    bool memory_missed_ = false;
    bool memory_called_ = false;
    bool plan_made_ = false;
    std::optional<PlotPayload> last_plot_;
    std::optional<std::filesystem::path> artifact_;
    std::string requested_;
    std::string delivered_ = "text";
    bool delivery_ok_ = true;

    trace::Event emit(EventKind kind, Node agent, Json data = Json::object()) {
        return c_.recorder.append(kind, std::string(to_string(agent)), std::move(data));
    }

    std::string complete(Node agent, const std::string& key, std::string system, std::string user);
    std::string node_input(Node node) const;
    std::string turn_transcript() const;
    std::string react_loop(Node node, const std::string& key, const std::string& input, bool debugger_assist);
    std::string dispatch(Node node, const std::string& tool, const std::string& input);
    std::string consult_debugger(Node caller, const std::string& error_text, const std::string& tool);
    std::string final_answer() const;

    NodeOutcome run_supervisor();
    NodeOutcome run_planner(const std::string& input);
    NodeOutcome run_simple(Node node, const std::string& input);
    NodeOutcome run_controller(const std::string& input);
    NodeOutcome run_critic(const std::string& input);
    NodeOutcome run_memory(MemoryMode mode, const std::string& input);
    NodeOutcome run_communicator(const std::string& input);
};

std::string TurnRunner::complete(Node agent, const std::string& key, std::string system, std::string user) {
    if (c_.state.step_count >= c_.config.max_steps) {
        throw Error(ErrorCode::RunAborted,
                    "step budget of " + std::to_string(c_.config.max_steps) + " completions exhausted");
    }
    llm::CompletionRequest req;
    req.system_text = std::move(system);
    req.user_text = std::move(user);
    req.model_name = c_.config.model_name;
    req.temperature = c_.config.temperature;
    req.max_output_tokens = c_.config.max_output_tokens;
    req.node = key;
    req.step = node_steps_[key]++;
    req.latest_user_message = query_;
    const llm::Completion out = c_.res.backend->complete(req);
    ++c_.state.step_count;
    Json data = llm::usage_to_json(out.usage);
    data["node"] = key;
    data["step"] = req.step;
    emit(EventKind::LlmCall, agent, std::move(data));
    return out.text;
}

std::string TurnRunner::node_input(Node node) const {
    std::string input = query_;
    std::string context;
    for (std::size_t i = first_message_; i < c_.state.message_list.size(); ++i) {
        const Message& m = c_.state.message_list[i];
        if (m.role != Role::Agent || m.agent_name == "Supervisor") continue;
        if (node == Node::Controller && m.agent_name == "Controller") continue;
        context += "\n\n" + m.agent_name + ": " + m.content;
    }
    if (!context.empty()) input += "\n\nContext from the team:" + context;
    return input;
}

std::string TurnRunner::turn_transcript() const {
    std::string out;
    for (std::size_t i = first_message_; i < c_.state.message_list.size(); ++i) {
        const Message& m = c_.state.message_list[i];
        if (!out.empty()) out += "\n";
        out += (m.role == Role::User ? std::string("User") : m.agent_name) + ": " + m.content;
    }
    return out;
}

std::string TurnRunner::final_answer() const {
    if (recalled_answer_) return *recalled_answer_;
    return controller_answer_;
}

std::string TurnRunner::consult_debugger(Node caller, const std::string& error_text, const std::string& tool) {
    const Node self = Node::Debugger;
    path_.push_back(std::string(to_string(self)));
    std::string input = "Error: " + error_text;
    if (!tool.empty()) input += "\nTool: " + tool;
    input += "\nQuestion: " + query_;
    emit(EventKind::AgentStarted, self, ev::agent_started(input));
    std::string advice;
    try {
        advice = react_loop(self, "Debugger", input, false);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::ParseFailure && e.code() != ErrorCode::NodeStalled) throw;
        emit(EventKind::Error, self, ev::error(to_string(e.code()), e.detail()));
        advice = tools::debug_advise(error_text, {tool, node_spec(caller).tool_ids}).text;
    }
    c_.add_message(Role::Agent, "Debugger", advice);
    emit(EventKind::AgentFinished, self, ev::agent_finished(advice, std::string(to_string(caller)), false));
    return advice;
}

std::string TurnRunner::react_loop(Node node, const std::string& key, const std::string& input, bool debugger_assist) {
    const AgentNodeSpec& spec = node_spec(node);
    const std::string tmpl = c_.prompts().node_template(spec.prompt);
    Json slots = {
        {"input", input},
        {"agent_tools", spec.tool_ids},
        {"tools", describe(spec.tool_ids)},
        {"controller_tools", describe(control_ids())},
        {"planner_tools", describe(node_spec(Node::Planner).tool_ids)},
        {"retriever_tools", describe(node_spec(Node::Retriever).tool_ids)},
        {"researcher_tools", describe(node_spec(Node::Researcher).tool_ids)},
        {"reasoning_tools", describe(node_spec(Node::Reasoner).tool_ids)},
        {"critic_tool", describe(node_spec(Node::Critic).tool_ids)},
        {"debugger_tools", describe(node_spec(Node::Debugger).tool_ids)},
        {"memory_tools", describe(node_spec(Node::Memory).tool_ids)},
        {"communicator_tools", describe(node_spec(Node::Communicator).tool_ids)},
    };

    std::string scratchpad;
    bool parse_retry_used = false;
    std::optional<bool> parse_pending;  // detected flag of an unresolved parse failure
    std::optional<PendingDebug> tool_pending;

    auto close_parse = [&](bool fixed) {
        if (!parse_pending) return;
        emit(EventKind::Debug, node, ev::debug("ParseFailure", *parse_pending, fixed, ""));
        parse_pending.reset();
    };
    auto close_tool = [&](bool fixed) {
        if (!tool_pending) return;
        emit(EventKind::Debug, node, ev::debug(tool_pending->error_class, tool_pending->detected, fixed, tool_pending->advice));
        tool_pending.reset();
    };

    for (int inner = 0;; ++inner) {
        if (inner >= c_.config.max_inner) {
            close_parse(false);
            close_tool(false);
            throw Error(ErrorCode::NodeStalled, std::string(to_string(node)) + " gave no final answer within " +
                                                    std::to_string(c_.config.max_inner) + " completions");
        }
        slots["agent_scratchpad"] = scratchpad;
        const std::string text = complete(node, key, render_prompt(tmpl, slots), input);

        ParsedCompletion parsed;
        try {
            parsed = parse_react(text);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::ParseFailure) throw;
            if (!debugger_assist) throw;
            emit(EventKind::Error, node, ev::error(to_string(e.code()), e.detail()));
            if (parse_retry_used) {
                close_parse(false);
                close_tool(false);
                throw Error(ErrorCode::NodeStalled,
                            std::string(to_string(node)) + " output could not be parsed after a re-prompt: " + e.detail());
            }
            parse_retry_used = true;
            const std::string error_text = e.what();
            parse_pending = tools::debug_advise(error_text, {"", spec.tool_ids}).known;
            const std::string advice = consult_debugger(node, error_text, "");
            scratchpad += trim(text) + "\nObservation: Invalid Format: " + e.detail() + "\nDebugger advice: " + advice +
                          "\nThought: ";
            continue;
        }
        close_parse(true);

        if (auto* fa = std::get_if<FinalAnswer>(&parsed)) {
            if (!fa->thought.empty()) emit(EventKind::Thought, node, {{"text", fa->thought}});
            close_tool(false);
            return fa->text.empty() ? std::string("(no answer)") : fa->text;
        }
        const ReActStep& step = std::get<ReActStep>(parsed);
        if (!step.thought.empty()) emit(EventKind::Thought, node, {{"text", step.thought}});
        const std::string tool = canonical_tool_id(step.action);
        std::string observation;
        try {
            if (std::find(spec.tool_ids.begin(), spec.tool_ids.end(), tool) == spec.tool_ids.end()) {
                throw Error(ErrorCode::UnknownTool, "'" + step.action + "' is not available to " +
                                                        std::string(to_string(node)) + "; use one of the listed tools");
            }
            observation = dispatch(node, tool, step.action_input);
            emit(EventKind::ToolCall, node, ev::tool_call(tool, step.action_input, true));
            close_tool(true);
        } catch (const TurnAborted&) {
            throw;
        } catch (const Error& e) {
            if (e.code() == ErrorCode::RunAborted || e.code() == ErrorCode::BackendError ||
                e.code() == ErrorCode::BackendAuthError) {
                throw;
            }
            emit(EventKind::ToolCall, node, ev::tool_call(tool, step.action_input, false, e.what()));
            observation = e.what();
            if (node == Node::Controller) {
                if (tool_pending) {
                    close_tool(false);
                } else {
                    const auto rule = tools::debug_advise(e.what(), {tool, spec.tool_ids});
                    const std::string advice = consult_debugger(node, e.what(), tool);
                    tool_pending = PendingDebug{rule.error_class, rule.known, advice};
                    observation += "\nDebugger advice: " + advice;
                }
            }
        }
        emit(EventKind::Observation, node, ev::observation(tool, observation));
        c_.add_message(Role::Tool, tool, observation);
        scratchpad += (step.thought.empty() ? std::string() : step.thought + "\n") + "Action: " + step.action +
                      "\nAction Input: " + step.action_input + "\nObservation: " + observation + "\nThought: ";
    }
}

std::string TurnRunner::dispatch(Node node, const std::string& tool, const std::string& input) {
    if (node == Node::Controller) {
        ToolResult r = dispatch_tool(tool, input, c_.registry);
        if (r.plot) {
            emit(EventKind::PlotPayload, node, *r.plot);
            last_plot_ = r.plot;
        }
        return r.observation;
    }
    if (tool == "planner_tool") {
        const Plan plan = planner_tool(input, query_, [&](const std::vector<std::string>& vocab) {
            std::string list;
            for (const auto& v : vocab) list += (list.empty() ? "" : ", ") + v;
            return complete(node, "Planner.planner_tool",
                            "Name the control objective of the question. Reply with one of: " + list + ".", query_);
        });
        emit(EventKind::Plan, node, ev::plan(plan.system_type, plan.objective, plan.ordered_tools));
        plan_made_ = true;
        return format_plan(plan);
    }
    if (tool == "retriever_tool") {
        if (!c_.res.corpus) throw Error(ErrorCode::NoCorpus, "no documents have been ingested");
        const auto result = tools::retriever_tool(input, *c_.res.corpus, c_.config.retrieve_k);
        return tools::format_retrieval(result, *c_.res.corpus);
    }
    if (tool == "search_tool") {
        return tools::format_search(tools::search_tool(input, c_.res.search.get()));
    }
    if (tool == "cot_tool" || tool == "tot_tool") {
        if (c_.state.step_count >= c_.config.max_steps) {
            throw Error(ErrorCode::RunAborted,
                        "step budget of " + std::to_string(c_.config.max_steps) + " completions exhausted");
        }
        tools::ReasonContext ctx;
        ctx.model_name = c_.config.model_name;
        ctx.latest_user_message = query_;
        ctx.temperature = c_.config.temperature;
        ctx.on_call = [&](const llm::CompletionRequest& req, const llm::Completion& out) {
            ++c_.state.step_count;
            Json data = llm::usage_to_json(out.usage);
            data["node"] = req.node;
            data["step"] = req.step;
            emit(EventKind::LlmCall, node, std::move(data));
        };
        const auto mode = tool == "cot_tool" ? tools::ReasonMode::Cot : tools::ReasonMode::Tot;
        return tools::reason_tool(mode, input, *c_.res.backend, ctx).text;
    }
    if (tool == "critic_tool") {
        const std::string answer = controller_answer_.empty() ? input : controller_answer_;
        verdict_ = tools::critic_tool(query_, answer, c_.config.critic_threshold);
        return tools::critic_observation(*verdict_);
    }
    if (tool == "debugger_tool") {
        return tools::debug_advise(input).text;
    }
    if (tool == "storage_memory_tool") {
        memory_called_ = true;
        bool ok = true;
        try {
            tools::storage_memory_tool(*c_.memory,
                                       tools::make_record(query_, turn_transcript(), final_answer(), std::time(nullptr)));
        } catch (const Error&) {
            ok = false;
            emit(EventKind::Memory, node, ev::memory_store(false));
            throw;
        }
        emit(EventKind::Memory, node, ev::memory_store(ok));
        return "The memory has been updated.";
    }
    if (tool == "recall_memory_tool") {
        memory_called_ = true;
        const auto hit = tools::recall_memory_tool(query_, *c_.memory, c_.config.recall_threshold);
        emit(EventKind::Memory, node, ev::memory_recall(hit.has_value(), hit ? hit->similarity : 0.0));
        if (!hit) {
            memory_missed_ = true;
            return "No stored conversation matches the question.";
        }
        recalled_answer_ = hit->record.answer;
        return "The memory has been recalled successfully. " + hit->record.answer + "\n" + hit->record.transcript;
    }
    if (tool == "human_tool") {
        if (!c_.res.human) throw Error(ErrorCode::MissingScriptedReply, "no user channel is attached");
        emit(EventKind::QuestionToUser, node, {{"prompt", input}});
        c_.state.pending_question = input;
        std::string reply;
        try {
            reply = c_.res.human->ask(input);
        } catch (...) {
            c_.state.pending_question.reset();
            throw;
        }
        c_.state.pending_question.reset();
        requested_ = requested_mode(reply);
        return reply;
    }
    if (tool == "text_to_pdf_tool") {
        const std::string text = turn_transcript() + "\n\nAnswer: " + final_answer();
        try {
            if (c_.config.output_dir.empty()) {
                const std::string pdf = tools::render_text_pdf(text);
                delivered_ = "pdf";
                return "The PDF has been created successfully (" + std::to_string(tools::page_count(text)) +
                       " page(s), " + std::to_string(pdf.size()) + " bytes).";
            }
            const auto path = c_.config.output_dir /
                              (c_.state.session_id + "-turn" + std::to_string(c_.turns + 1) + ".pdf");
            const std::size_t pages = tools::text_to_pdf_tool(text, path);
            delivered_ = "pdf";
            artifact_ = path;
            return "The PDF has been created successfully (" + std::to_string(pages) + " page(s)) at " + path.string() + ".";
        } catch (const Error&) {
            delivery_ok_ = false;
            throw;
        }
    }
    if (tool == "speech_tool" || tool == "translation_tool") {
        delivery_ok_ = false;
        if (tool == "speech_tool") return tools::speech_tool(final_answer());
        return tools::translate_tool(final_answer(), input);
    }
    throw Error(ErrorCode::UnknownTool, "'" + tool + "' has no handler");
}

NodeOutcome TurnRunner::run_supervisor() {
    std::vector<Node> allowed = node_spec(Node::Supervisor).successors;
    if (memory_missed_) allowed.erase(std::remove(allowed.begin(), allowed.end(), Node::Memory), allowed.end());

    Json members = Json::array();
    Json tools = Json::object();
    for (Node n : node_spec(Node::Supervisor).successors) {
        const std::string name(to_string(n));
        members.push_back(name);
        tools[name] = node_spec(n).tool_ids;
    }
    members.push_back("Controller");
    tools["Controller"] = "the control tools";
    const std::string system = render_prompt(c_.prompts().supervisor_template(), {{"supervisor_members", members}, {"tools", tools}});

    std::string options;
    for (Node n : allowed) options += (options.empty() ? "" : ", ") + std::string(to_string(n));
    std::string history;
    for (std::size_t i = 0; i < first_message_; ++i) {
        const Message& m = c_.state.message_list[i];
        if (m.role == Role::Tool) continue;
        history += (m.role == Role::User ? std::string("User") : m.agent_name) + ": " + m.content.substr(0, 300) + "\n";
    }
    std::string user = render_prompt(c_.prompts().routing_template(), {{"input", query_}, {"options", options}});
    if (!history.empty()) user = "Conversation so far:\n" + history + "\n" + user;
    if (memory_missed_) user += "\nMemory holds no answer for this question.";

    for (int attempt = 0; attempt < 2; ++attempt) {
        const std::string reply = complete(Node::Supervisor, "Supervisor", system, user);
        emit(EventKind::Thought, Node::Supervisor, {{"text", trim(reply)}});
        if (auto route = parse_route(reply, allowed)) {
            return {"<Route to " + std::string(to_string(*route)) + ">", *route};
        }
    }
    NodeOutcome out{"<Route to Planner>", Node::Planner};
    out.extra["fallback"] = true;
    return out;
}

NodeOutcome TurnRunner::run_planner(const std::string& input) {
    plan_made_ = false;
    std::string output;
    try {
        output = react_loop(Node::Planner, "Planner", input, true);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::NodeStalled) throw;
        emit(EventKind::Error, Node::Planner, ev::error(to_string(e.code()), e.detail()));
        output = e.what();
    }
    if (!plan_made_) {
        try {
            output = dispatch(Node::Planner, "planner_tool", query_) + "\n" + output;
        } catch (const Error& e) {
            if (e.code() != ErrorCode::PlanFailure) throw;
            emit(EventKind::Error, Node::Planner, ev::error(to_string(e.code()), e.detail()));
        }
    }
    return {output, Node::Controller};
}

NodeOutcome TurnRunner::run_simple(Node node, const std::string& input) {
    std::string output;
    try {
        output = react_loop(node, std::string(to_string(node)), input, true);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::NodeStalled) throw;
        emit(EventKind::Error, node, ev::error(to_string(e.code()), e.detail()));
        output = e.what();
    }
    return {output, node_spec(node).successors.front()};
}

NodeOutcome TurnRunner::run_controller(const std::string& input) {
    std::string output;
    try {
        output = react_loop(Node::Controller, "Controller", input, true);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::NodeStalled) throw;
        emit(EventKind::Error, Node::Controller, ev::error(to_string(e.code()), e.detail()));
        output = e.what();
    }
    controller_answer_ = output;
    return {output, Node::Critic};
}

NodeOutcome TurnRunner::run_critic(const std::string& input) {
    verdict_.reset();
    std::string output;
    try {
        output = react_loop(Node::Critic, "Critic", input, true);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::NodeStalled) throw;
        emit(EventKind::Error, Node::Critic, ev::error(to_string(e.code()), e.detail()));
        output = e.what();
    }
    if (!verdict_) verdict_ = tools::critic_tool(query_, controller_answer_, c_.config.critic_threshold);
    const auto& v = *verdict_;
    if (v.accepted) {
        emit(EventKind::CriticVerdict, Node::Critic, ev::critic_verdict(v.similarity, true, v.threshold, false, controller_answer_));
        rejections_ = 0;
        return {output, Node::Memory};
    }
    ++rejections_;
    if (rejections_ > c_.config.max_revisions) {
        emit(EventKind::CriticVerdict, Node::Critic, ev::critic_verdict(v.similarity, true, v.threshold, true, controller_answer_));
        rejections_ = 0;
        return {output, Node::Memory};
    }
    emit(EventKind::CriticVerdict, Node::Critic, ev::critic_verdict(v.similarity, false, v.threshold, false, controller_answer_));
    return {"Revise the answer. " + output, Node::Controller};
}

NodeOutcome TurnRunner::run_memory(MemoryMode mode, const std::string& input) {
    const std::string key = mode == MemoryMode::Store ? "Memory.store" : "Memory.recall";
    memory_called_ = false;
    std::string output;
    try {
        output = react_loop(Node::Memory, key, input, true);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::NodeStalled) throw;
        emit(EventKind::Error, Node::Memory, ev::error(to_string(e.code()), e.detail()));
        output = e.what();
    }
    if (!memory_called_) {
        const std::string tool = mode == MemoryMode::Store ? "storage_memory_tool" : "recall_memory_tool";
        try {
            const std::string obs = dispatch(Node::Memory, tool, query_);
            emit(EventKind::ToolCall, Node::Memory, ev::tool_call(tool, query_, true));
            emit(EventKind::Observation, Node::Memory, ev::observation(tool, obs));
        } catch (const Error& e) {
            if (e.code() != ErrorCode::StoreError && e.code() != ErrorCode::ValidationError) throw;
            emit(EventKind::ToolCall, Node::Memory, ev::tool_call(tool, query_, false, e.what()));
        }
    }
    if (mode == MemoryMode::Store) return {output, Node::Communicator};
    if (recalled_answer_) return {output, Node::Communicator};
    return {"No stored answer for this question; escalating to the Supervisor. " + output, Node::Supervisor};
}

NodeOutcome TurnRunner::run_communicator(const std::string& input) {
    requested_ = requested_mode(query_);
    delivered_ = "text";
    delivery_ok_ = true;
    std::string output;
    try {
        output = react_loop(Node::Communicator, "Communicator", input, true);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::NodeStalled) throw;
        emit(EventKind::Error, Node::Communicator, ev::error(to_string(e.code()), e.detail()));
        output = e.what();
    }
    emit(EventKind::Delivery, Node::Communicator,
         ev::delivery(requested_, delivered_, delivery_ok_, artifact_ ? artifact_->string() : std::string()));
    return {output, std::nullopt};
}

TurnResult TurnRunner::run() {
    c_.state.step_count = 0;
    c_.state.pending_question.reset();
    first_message_ = c_.state.message_list.size();
    const std::uint64_t first_seq = c_.recorder.last_seq();
    c_.add_message(Role::User, "", query_);

    auto collect = [&] {
        trace::RunTrace t;
        t.run_id = c_.state.session_id + "/" + std::to_string(c_.turns + 1);
        t.events = c_.recorder.events_after(first_seq);
        return t;
    };

    std::optional<Node> node = Node::Supervisor;
    std::optional<Node> previous;
    try {
        while (node) {
            const Node current = *node;
            c_.state.current_node = std::string(to_string(current));
            path_.push_back(c_.state.current_node);
            const std::string input = current == Node::Supervisor ? query_ : node_input(current);
            emit(EventKind::AgentStarted, current, ev::agent_started(input));
            NodeOutcome out;
            switch (current) {
                case Node::Supervisor: out = run_supervisor(); break;
                case Node::Planner: out = run_planner(input); break;
                case Node::Retriever:
                case Node::Researcher:
                case Node::Reasoner: out = run_simple(current, input); break;
                case Node::Controller: out = run_controller(input); break;
                case Node::Critic: out = run_critic(input); break;
                case Node::Memory:
                    out = run_memory(previous == Node::Critic ? MemoryMode::Store : MemoryMode::Recall, input);
                    break;
                case Node::Communicator: out = run_communicator(input); break;
                case Node::Debugger: out = run_simple(current, input); break;
            }
            c_.add_message(Role::Agent, c_.state.current_node, out.output);
            Json finished = ev::agent_finished(
                out.output, out.next ? std::optional<std::string>(std::string(to_string(*out.next))) : std::nullopt,
                node_spec(current).conditional);
            finished.update(out.extra);
            emit(EventKind::AgentFinished, current, std::move(finished));
            previous = current;
            node = out.next;
        }
    } catch (const Error& e) {
        c_.recorder.append(EventKind::Error, c_.state.current_node, ev::error(to_string(e.code()), e.detail()));
        c_.state.current_node = std::string(kEnd);
        ++c_.turns;
        throw TurnAborted(e, collect(), path_);
    }
    c_.state.current_node = std::string(kEnd);

    TurnResult result;
    result.final_answer = final_answer();
    if (result.final_answer.empty()) result.final_answer = c_.state.message_list.back().content;
    emit(EventKind::FinalAnswer, Node::Communicator, ev::final_answer(result.final_answer));
    result.trace = collect();
    result.path = path_;
    result.last_plot = last_plot_;
    result.artifact = artifact_;
    ++c_.turns;
    return result;
}

}  // namespace

Conversation::Conversation(std::string session_id, Resources resources, GraphConfig config)
    : impl_(std::make_unique<Impl>()) {
    validate(config);
    if (!resources.backend) throw Error(ErrorCode::ValidationError, "a backend is required");
    impl_->memory = resources.memory ? resources.memory : std::make_shared<tools::InMemoryStore>();
    impl_->res = std::move(resources);
    impl_->config = std::move(config);
    impl_->state.session_id = std::move(session_id);
    impl_->state.current_node = std::string(kEnd);
}

Conversation::~Conversation() = default;

TurnResult Conversation::run_turn(std::string_view query) {
    if (trim(query).empty()) throw Error(ErrorCode::ValidationError, "query is empty");
    TurnRunner runner(*impl_, trim(query));
    return runner.run();
}

const ConversationState& Conversation::state() const noexcept { return impl_->state; }
trace::Recorder& Conversation::recorder() noexcept { return impl_->recorder; }
const SystemRegistry& Conversation::registry() const noexcept { return impl_->registry; }
const GraphConfig& Conversation::config() const noexcept { return impl_->config; }
tools::MemoryStore& Conversation::memory() noexcept { return *impl_->memory; }
std::size_t Conversation::turns() const noexcept { return impl_->turns; }

TurnResult run_conversation(std::string_view query, Resources resources, GraphConfig config) {
    Conversation conversation("run", std::move(resources), std::move(config));
    return conversation.run_turn(query);
}

}  // namespace agentctl::agents
