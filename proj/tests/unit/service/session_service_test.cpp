#include <gtest/gtest.h>

#include <thread>

#include "agentctl/error.hpp"
#include "agentctl/llm/scripted.hpp"
#include "agentctl/service/session_service.hpp"

namespace agentctl::service {
namespace {

using namespace std::chrono_literals;
using trace::EventKind;

constexpr const char* kQuery =
    "Use Ackermann's formula to place the poles of A = [[0, 1], [-2, -3]], B = [[0], [1]] at [-3, -4].";

constexpr const char* kScript = R"(
@ Supervisor 0 *
<Route to Planner>
@ Controller 0 *
Action: acker
Action Input: A = [[0, 1], [-2, -3]], B = [[0], [1]], poles = [-3, -4]
@ Controller 1 *
Final Answer: Ackermann's formula places the poles of A = [[0, 1], [-2, -3]], B = [[0], [1]] at [-3, -4] with K = [[10, 4]].
@ Communicator 0 *
Action: human_tool
Action Input: Text or PDF?
@ Communicator 1 *
Final Answer: Sent as text.
)";

ServiceConfig config(const char* script = kScript) {
    ServiceConfig c;
    const std::string text = script;
    c.backend = [text] { return std::make_unique<llm::ScriptedBackend>(llm::Script::parse(text)); };
    c.memory = std::make_shared<tools::InMemoryStore>();
    c.human_timeout = 5s;
    return c;
}

ErrorCode code_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no error raised";
    return ErrorCode::ValidationError;
}

void wait_for_question(SessionService& svc, const std::string& id) {
    for (int i = 0; i < 500 && !svc.pending_question(id); ++i) std::this_thread::sleep_for(10ms);
    ASSERT_TRUE(svc.pending_question(id).has_value());
}

TEST(Overrides, AppliedAndValidated) {
    agents::GraphConfig base;
    const auto c = apply_overrides(base, {{"critic_threshold", 0.7}, {"max_steps", 12}, {"model_name", "gpt-4o"}});
    EXPECT_DOUBLE_EQ(c.critic_threshold, 0.7);
    EXPECT_EQ(c.max_steps, 12);
    EXPECT_EQ(c.model_name, "gpt-4o");
    EXPECT_EQ(base.max_steps, 40);
    EXPECT_EQ(code_of([&] { apply_overrides(base, {{"colour", "red"}}); }), ErrorCode::ValidationError);
    EXPECT_EQ(code_of([&] { apply_overrides(base, {{"max_steps", "many"}}); }), ErrorCode::ValidationError);
    EXPECT_EQ(code_of([&] { apply_overrides(base, {{"critic_threshold", 3}}); }), ErrorCode::ValidationError);
    EXPECT_EQ(code_of([&] { apply_overrides(base, {{"max_steps", 0}}); }), ErrorCode::ValidationError);
}

TEST(Sessions, CreateWithOverrides) {
    SessionService svc(config());
    const auto a = svc.create_session();
    const auto b = svc.create_session({{"critic_threshold", 0.3}});
    EXPECT_NE(a, b);
    EXPECT_EQ(svc.session_count(), 2u);
    EXPECT_DOUBLE_EQ(svc.session_config(b).critic_threshold, 0.3);
    EXPECT_EQ(code_of([&] { svc.create_session({{"nope", 1}}); }), ErrorCode::ValidationError);
    EXPECT_EQ(svc.session_count(), 2u);
}

TEST(Sessions, UnknownIdIsNotFound) {
    SessionService svc(config());
    EXPECT_EQ(code_of([&] { svc.post_message("s99", kQuery); }), ErrorCode::NotFound);
    EXPECT_EQ(code_of([&] { svc.trace("s99"); }), ErrorCode::NotFound);
    EXPECT_EQ(code_of([&] { svc.answer("s99", "pdf"); }), ErrorCode::NotFound);
}

TEST(Sessions, QuestionBlocksUntilAnswered) {
    SessionService svc(config());
    const auto id = svc.create_session();
    EXPECT_EQ(code_of([&] { svc.answer(id, "text"); }), ErrorCode::NoQuestion);
    EXPECT_EQ(code_of([&] { svc.post_message(id, "  "); }), ErrorCode::ValidationError);

    const auto first = svc.post_message(id, kQuery);
    EXPECT_EQ(first, 0u);
    wait_for_question(svc, id);
    EXPECT_EQ(*svc.pending_question(id), "Text or PDF?");
    EXPECT_TRUE(svc.status(id).running);
    EXPECT_EQ(code_of([&] { svc.post_message(id, kQuery); }), ErrorCode::Busy);

    svc.answer(id, "text");
    svc.join(id);
    const auto st = svc.status(id);
    EXPECT_FALSE(st.running);
    ASSERT_TRUE(st.final_answer.has_value());
    EXPECT_NE(st.final_answer->find("K = [[10, 4]]"), std::string::npos);
    EXPECT_FALSE(svc.pending_question(id).has_value());

    const auto events = svc.trace(id);
    ASSERT_FALSE(events.empty());
    EXPECT_EQ(events.back().kind, EventKind::FinalAnswer);
    EXPECT_EQ(svc.events_after(id, first).size(), events.size());
}

TEST(Sessions, WaitEventsReportsTurnEnd) {
    SessionService svc(config());
    const auto id = svc.create_session();
    std::uint64_t cursor = svc.post_message(id, kQuery);
    std::vector<trace::Event> seen;
    bool answered = false;
    for (int i = 0; i < 200; ++i) {
        auto [events, over] = svc.wait_events(id, cursor, 100ms);
        for (auto& e : events) {
            cursor = e.seq;
            if (e.kind == EventKind::QuestionToUser && !answered) {
                // the worker may not be blocked yet
                wait_for_question(svc, id);
                svc.answer(id, "text");
                answered = true;
            }
            seen.push_back(std::move(e));
        }
        if (over) break;
    }
    EXPECT_TRUE(answered);
    ASSERT_FALSE(seen.empty());
    EXPECT_EQ(seen.size(), svc.trace(id).size());
    for (std::size_t i = 1; i < seen.size(); ++i) EXPECT_EQ(seen[i].seq, seen[i - 1].seq + 1);
}

TEST(Sessions, SecondTurnContinuesSequence) {
    SessionService svc(config());
    const auto id = svc.create_session();
    svc.post_message(id, kQuery);
    wait_for_question(svc, id);
    svc.answer(id, "text");
    svc.join(id);
    const auto after_first = svc.trace(id).back().seq;
    const auto from = svc.post_message(id, kQuery);
    EXPECT_EQ(from, after_first);
    wait_for_question(svc, id);
    svc.answer(id, "text");
    svc.join(id);
    EXPECT_GT(svc.trace(id).back().seq, after_first);
    EXPECT_EQ(svc.trace(id)[after_first].kind, EventKind::AgentStarted);
}

TEST(Sessions, BackendFailureEndsTurnWithError) {
    ServiceConfig c = config();
    c.graph.max_steps = 1;
    SessionService svc(std::move(c));
    const auto id = svc.create_session();
    svc.post_message(id, kQuery);
    svc.join(id);
    const auto st = svc.status(id);
    ASSERT_TRUE(st.error.has_value());
    EXPECT_NE(st.error->find("RunAborted"), std::string::npos);
    EXPECT_EQ(svc.trace(id).back().kind, EventKind::Error);
}

TEST(Sessions, DestructorReleasesBlockedTurn) {
    auto svc = std::make_unique<SessionService>(config());
    const auto id = svc->create_session();
    svc->post_message(id, kQuery);
    wait_for_question(*svc, id);
    svc.reset();
    SUCCEED();
}

}  // namespace
}  // namespace agentctl::service
