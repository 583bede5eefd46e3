#include <gtest/gtest.h>

#include "agentctl/agents/graph.hpp"
#include "agentctl/error.hpp"
#include "agentctl/llm/scripted.hpp"

namespace agentctl::agents {
namespace {

using trace::EventKind;
using Path = std::vector<std::string>;

constexpr const char* kAcker =
    "Use Ackermann's formula to place the poles of A = [[0, 1], [-2, -3]], B = [[0], [1]] at [-3, -4].";

struct Harness {
    llm::ScriptedBackend backend;
    std::shared_ptr<tools::InMemoryStore> memory = std::make_shared<tools::InMemoryStore>();
    std::shared_ptr<tools::ScriptedReplies> human = std::make_shared<tools::ScriptedReplies>();

    explicit Harness(std::string_view script) : backend(llm::Script::parse(script)) {}

    Resources resources() {
        Resources r;
        r.backend = &backend;
        r.memory = memory;
        r.human = human;
        return r;
    }
};

std::size_t count(const trace::RunTrace& t, EventKind kind) { return trace::select(t, kind).size(); }

TEST(Graph, UnscriptedTurnTakesDefaultPath) {
    Harness h("");
    const auto r = run_conversation(kAcker, h.resources());
    EXPECT_EQ(r.path, (Path{"Supervisor", "Planner", "Controller", "Critic", "Memory", "Communicator"}));
    const auto plans = trace::select(r.trace, EventKind::Plan);
    ASSERT_EQ(plans.size(), 1u);
    EXPECT_EQ(plans[0]->data["objective"], "acker");
    EXPECT_EQ(count(r.trace, EventKind::FinalAnswer), 1u);
    EXPECT_EQ(h.memory->size(), 1u);
}

TEST(Graph, ControllerToolCallFeedsAnswer) {
    Harness h(R"(
@ Supervisor 0 *
<Route to Planner>
@ Controller 0 *
Thought: Ackermann directly.
Action: acker
Action Input: A = [[0, 1], [-2, -3]], B = [[0], [1]], poles = [-3, -4]
@ Controller 1 *
Final Answer: Using Ackermann's formula on A = [[0, 1], [-2, -3]], B = [[0], [1]] the poles move to [-3, -4] with K = [[10, 4]].
)");
    const auto r = run_conversation(kAcker, h.resources());
    EXPECT_NE(r.final_answer.find("K = [[10, 4]]"), std::string::npos);
    const auto calls = trace::select(r.trace, EventKind::ToolCall, "Controller");
    ASSERT_EQ(calls.size(), 1u);
    EXPECT_EQ(calls[0]->data["tool"], "acker");
    EXPECT_TRUE(calls[0]->data["ok"].get<bool>());
    const auto obs = trace::select(r.trace, EventKind::Observation, "Controller");
    ASSERT_EQ(obs.size(), 1u);
    EXPECT_NE(obs[0]->data["text"].get<std::string>().find("K = [[10, 4]]"), std::string::npos);
}

TEST(Graph, CriticForcesAcceptAfterRevisionBudget) {
    Harness h(R"(
@ Controller 0 *
Final Answer: K = [[10, 4]]
@ Controller 1 *
Final Answer: K = [[10, 4]]
@ Controller 2 *
Final Answer: K = [[10, 4]]
)");
    GraphConfig cfg;
    cfg.critic_threshold = 0.99;
    const auto r = run_conversation(kAcker, h.resources(), cfg);
    EXPECT_EQ(r.path, (Path{"Supervisor", "Planner", "Controller", "Critic", "Controller", "Critic", "Controller",
                            "Critic", "Memory", "Communicator"}));
    const auto verdicts = trace::select(r.trace, EventKind::CriticVerdict);
    ASSERT_EQ(verdicts.size(), 3u);
    EXPECT_FALSE(verdicts[0]->data["accepted"].get<bool>());
    EXPECT_FALSE(verdicts[1]->data["accepted"].get<bool>());
    EXPECT_TRUE(verdicts[2]->data["accepted"].get<bool>());
    EXPECT_TRUE(verdicts[2]->data["forced"].get<bool>());
}

TEST(Graph, StepBudgetAbortsWithPartialTrace) {
    Harness h(R"(
@ Supervisor 0 *
<Route to Planner>
)");
    GraphConfig cfg;
    cfg.max_steps = 2;
    try {
        run_conversation(kAcker, h.resources(), cfg);
        FAIL() << "expected an abort";
    } catch (const TurnAborted& e) {
        EXPECT_EQ(e.code(), ErrorCode::RunAborted);
        ASSERT_FALSE(e.trace().events.empty());
        EXPECT_EQ(e.trace().events.back().kind, EventKind::Error);
        EXPECT_EQ(e.path().back(), "Controller");
        EXPECT_EQ(count(e.trace(), EventKind::LlmCall), 2u);
    }
}

TEST(Graph, DefaultBudgetIsForty) {
    EXPECT_EQ(GraphConfig{}.max_steps, 40);
    GraphConfig bad;
    bad.critic_threshold = 1.5;
    EXPECT_THROW(validate(bad), Error);
}

TEST(Graph, DebuggerFixesToolError) {
    Harness h(R"(
@ Controller 0 *
Action: ss
Action Input: A = [[0, 1], [-2, -3]], B = [[0], [1]]
@ Controller 1 *
Action: acker
Action Input: A = [[0, 1], [-2, -3]], B = [[0], [1]], poles = [-3, -4]
@ Controller 2 *
Final Answer: K = [[10, 4]] places the poles of A = [[0, 1], [-2, -3]] at [-3, -4].
)");
    const auto r = run_conversation(kAcker, h.resources());
    EXPECT_EQ(r.path, (Path{"Supervisor", "Planner", "Controller", "Debugger", "Critic", "Memory", "Communicator"}));
    const auto debug = trace::select(r.trace, EventKind::Debug);
    ASSERT_EQ(debug.size(), 1u);
    EXPECT_EQ(debug[0]->data["error_class"], "ArgParseError");
    EXPECT_TRUE(debug[0]->data["detected"].get<bool>());
    EXPECT_TRUE(debug[0]->data["fixed"].get<bool>());
    const auto dbg_finish = trace::select(r.trace, EventKind::AgentFinished, "Debugger");
    ASSERT_EQ(dbg_finish.size(), 1u);
    EXPECT_FALSE(dbg_finish[0]->data["conditional"].get<bool>());
}

TEST(Graph, ParseFailureGetsOneReprompt) {
    Harness h(R"(
@ Controller 0 *
the gain is ten and four
@ Controller 1 *
Final Answer: K = [[10, 4]] for A = [[0, 1], [-2, -3]].
)");
    const auto r = run_conversation(kAcker, h.resources());
    const auto errors = trace::select(r.trace, EventKind::Error, "Controller");
    ASSERT_EQ(errors.size(), 1u);
    EXPECT_EQ(errors[0]->data["code"], "ParseFailure");
    const auto debug = trace::select(r.trace, EventKind::Debug);
    ASSERT_EQ(debug.size(), 1u);
    EXPECT_EQ(debug[0]->data["error_class"], "ParseFailure");
    EXPECT_TRUE(debug[0]->data["fixed"].get<bool>());
}

TEST(Graph, ToolOutsideNodeListIsUnknownTool) {
    Harness h(R"(
@ Controller 0 *
Action: retriever_tool
Action Input: transfer function
@ Controller 1 *
Final Answer: K = [[10, 4]]
)");
    const auto r = run_conversation(kAcker, h.resources());
    const auto calls = trace::select(r.trace, EventKind::ToolCall, "Controller");
    ASSERT_EQ(calls.size(), 1u);
    EXPECT_FALSE(calls[0]->data["ok"].get<bool>());
    EXPECT_NE(calls[0]->data["error"].get<std::string>().find("UnknownTool"), std::string::npos);
}

TEST(Graph, CommunicatorAsksAndDeliversPdf) {
    Harness h(R"(
@ Communicator 0 *
Action: human_tool
Action Input: Would you like the answer as text or as a PDF?
@ Communicator 1 *
Action: text_to_pdf_tool
Action Input: answer
@ Communicator 2 *
Final Answer: The PDF is ready.
)");
    h.human->push("pdf");
    const auto r = run_conversation(kAcker, h.resources());
    ASSERT_EQ(count(r.trace, EventKind::QuestionToUser), 1u);
    const auto d = trace::select(r.trace, EventKind::Delivery);
    ASSERT_EQ(d.size(), 1u);
    EXPECT_EQ(d[0]->data["requested"], "pdf");
    EXPECT_EQ(d[0]->data["delivered"], "pdf");
    EXPECT_TRUE(d[0]->data["ok"].get<bool>());
    EXPECT_EQ(h.human->remaining(), 0u);
}

constexpr const char* kTwoTurns = R"(
query q1 = Use Ackermann's formula to place the poles of A = [[0, 1], [-2, -3]], B = [[0], [1]] at [-3, -4].
query q2 = Again, use Ackermann's formula to place the poles of A = [[0, 1], [-2, -3]], B = [[0], [1]] at [-3, -4].
@ Supervisor 0 q1
<Route to Planner>
@ Controller 0 q1
Action: acker
Action Input: A = [[0, 1], [-2, -3]], B = [[0], [1]], poles = [-3, -4]
@ Controller 1 q1
Final Answer: Ackermann's formula places the poles of A = [[0, 1], [-2, -3]], B = [[0], [1]] at [-3, -4] with K = [[10, 4]].
@ Supervisor 0 q2
<Route to Memory>
)";

TEST(Graph, SecondTurnRecallsFromMemory) {
    Harness h(kTwoTurns);
    Conversation conv("c1", h.resources());
    const auto first = conv.run_turn(
        "Use Ackermann's formula to place the poles of A = [[0, 1], [-2, -3]], B = [[0], [1]] at [-3, -4].");
    const auto second = conv.run_turn(
        "Again, use Ackermann's formula to place the poles of A = [[0, 1], [-2, -3]], B = [[0], [1]] at [-3, -4].");
    EXPECT_EQ(second.path, (Path{"Supervisor", "Memory", "Communicator"}));
    EXPECT_EQ(second.final_answer, first.final_answer);
    const auto mem = trace::select(second.trace, EventKind::Memory);
    ASSERT_EQ(mem.size(), 1u);
    EXPECT_TRUE(mem[0]->data["hit"].get<bool>());
    EXPECT_EQ(conv.turns(), 2u);
}

TEST(Graph, RecallMissReroutesThroughSupervisor) {
    Harness h(R"(
@ Supervisor 0 *
<Route to Memory>
@ Supervisor 1 *
<Route to Planner>
)");
    const auto r = run_conversation(kAcker, h.resources());
    EXPECT_EQ(r.path, (Path{"Supervisor", "Memory", "Supervisor", "Planner", "Controller", "Critic", "Memory",
                            "Communicator"}));
}

// Invariants over a multi-turn session.

TEST(GraphInvariant, MessageListOnlyGrows) {
    Harness h(kTwoTurns);
    Conversation conv("c1", h.resources());
    conv.run_turn("Use Ackermann's formula to place the poles of A = [[0, 1], [-2, -3]], B = [[0], [1]] at [-3, -4].");
    const auto before = conv.state().message_list;
    conv.run_turn(
        "Again, use Ackermann's formula to place the poles of A = [[0, 1], [-2, -3]], B = [[0], [1]] at [-3, -4].");
    const auto& after = conv.state().message_list;
    ASSERT_GT(after.size(), before.size());
    for (std::size_t i = 0; i < before.size(); ++i) {
        EXPECT_EQ(after[i].content, before[i].content) << i;
        EXPECT_EQ(after[i].agent_name, before[i].agent_name) << i;
    }
    EXPECT_EQ(conv.state().current_node, kEnd);
}

TEST(GraphInvariant, ScriptedReplayIsByteIdentical) {
    auto run = [] {
        Harness h(kTwoTurns);
        Conversation conv("c1", h.resources());
        std::string out;
        out += trace::to_jsonl(conv.run_turn("Use Ackermann's formula to place the poles of A = [[0, 1], [-2, -3]], "
                                             "B = [[0], [1]] at [-3, -4].")
                                   .trace,
                               false);
        out += trace::to_jsonl(conv.run_turn("Again, use Ackermann's formula to place the poles of A = [[0, 1], "
                                             "[-2, -3]], B = [[0], [1]] at [-3, -4].")
                                   .trace,
                               false);
        return out;
    };
    EXPECT_EQ(run(), run());
}

TEST(GraphInvariant, RoutesStayWithinSuccessorsAndSeqIncreases) {
    Harness h(R"(
@ Supervisor 0 *
<Route to Memory>
@ Supervisor 1 *
<Route to Planner>
@ Controller 0 *
Action: ss
Action Input: A = [[0, 1], [-2, -3]]
@ Controller 1 *
Final Answer: K = [[10, 4]]
@ Controller 2 *
Final Answer: K = [[10, 4]]
)");
    GraphConfig cfg;
    cfg.critic_threshold = 0.9;
    const auto r = run_conversation(kAcker, h.resources(), cfg);
    std::uint64_t last = 0;
    for (const auto& e : r.trace.events) {
        EXPECT_GT(e.seq, last);
        last = e.seq;
        if (e.kind != EventKind::AgentFinished || !e.data.contains("routed_next") || e.data["routed_next"].is_null()) continue;
        const Node from = *node_from_string(e.agent);
        const Node to = *node_from_string(e.data["routed_next"].get<std::string>());
        const auto& succ = node_spec(from).successors;
        EXPECT_NE(std::find(succ.begin(), succ.end(), to), succ.end()) << e.agent << " -> " << e.data["routed_next"];
    }
    const auto ends = trace::select(r.trace, EventKind::AgentFinished, "Communicator");
    ASSERT_EQ(ends.size(), 1u);
    EXPECT_TRUE(ends[0]->data["routed_next"].is_null());
}

TEST(GraphInvariant, ConditionalFlagMatchesNodeTable) {
    Harness h("");
    const auto r = run_conversation(kAcker, h.resources());
    for (const auto* e : trace::select(r.trace, EventKind::AgentFinished)) {
        EXPECT_EQ(e->data["conditional"].get<bool>(), node_spec(*node_from_string(e->agent)).conditional) << e->agent;
    }
}

}  // namespace
}  // namespace agentctl::agents
