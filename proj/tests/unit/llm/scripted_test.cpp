#include <gtest/gtest.h>

#include "agentctl/error.hpp"
#include "agentctl/llm/scripted.hpp"

namespace agentctl::llm {
namespace {

constexpr const char* kScript = R"(# routing fixture
query q1 = Retrieve the Transfer Function of the system.

@ Supervisor 0 q1
Retriever
@ Retriever 0 q1
Thought: I need the document.
Action: retriever_tool
Action Input: transfer function

@end
@ Critic 0 *
Final Answer: fine
)";

CompletionRequest request(std::string node, int step, std::string message) {
    CompletionRequest r;
    r.system_text = "system";
    r.user_text = message;
    r.model_name = "scripted";
    r.node = std::move(node);
    r.step = step;
    r.latest_user_message = std::move(message);
    return r;
}

TEST(Script, ParsesLabelsBlocksAndWildcards) {
    const Script s = Script::parse(kScript);
    EXPECT_EQ(s.size(), 3u);
    const std::string h = message_hash("Retrieve the Transfer Function of the system.");
    EXPECT_EQ(s.labels().at("q1"), h);
    EXPECT_EQ(s.lookup({"Supervisor", 0, h}).value(), "Retriever");
    // Trailing blank lines inside a block are dropped.
    EXPECT_EQ(s.lookup({"Retriever", 0, h}).value(),
              "Thought: I need the document.\nAction: retriever_tool\nAction Input: transfer function");
    EXPECT_EQ(s.lookup({"Critic", 0, "anything"}).value(), "Final Answer: fine");
    EXPECT_FALSE(s.lookup({"Critic", 1, h}).has_value());
}

TEST(Script, HashKeysAndExactBeatsWildcard) {
    const std::string h = message_hash("hello");
    Script s = Script::parse("@ Planner 0 *\nwild\n@ Planner 0 #" + h + "\nexact\n@end\n");
    EXPECT_EQ(s.lookup({"Planner", 0, h}).value(), "exact");
    EXPECT_EQ(s.lookup({"Planner", 0, message_hash("other")}).value(), "wild");
}

TEST(Script, RejectsMalformedInput) {
    EXPECT_THROW(Script::parse("@ Planner x q\nbody\n"), Error);
    EXPECT_THROW(Script::parse("@ Planner 0\nbody\n"), Error);
    EXPECT_THROW(Script::parse("@ Planner 0 missing\nbody\n"), Error);
    EXPECT_THROW(Script::parse("stray text\n"), Error);
    EXPECT_THROW(Script::parse("query nolabel\n"), Error);
}

TEST(MessageHash, IgnoresSurroundingWhitespace) {
    EXPECT_EQ(message_hash("  abc \n"), message_hash("abc"));
    EXPECT_NE(message_hash("abc"), message_hash("abd"));
}

TEST(ScriptedBackend, ReturnsCannedRouteForFingerprint) {
    ScriptedBackend backend(Script::parse(kScript));
    const auto c = backend.complete(request("Supervisor", 0, "Retrieve the Transfer Function of the system."));
    EXPECT_EQ(c.text, "Retriever");
    EXPECT_EQ(backend.misses(), 0u);
}

TEST(ScriptedBackend, UnknownFingerprintEchoes) {
    ScriptedBackend backend(Script::parse(kScript));
    const auto c = backend.complete(request("Controller", 3, "  what is K?  "));
    EXPECT_EQ(c.text, "Final Answer: what is K?");
    EXPECT_EQ(backend.misses(), 1u);
}

TEST(ScriptedBackend, SameFingerprintSameText) {
    ScriptedBackend backend(Script::parse(kScript));
    const auto r = request("Retriever", 0, "Retrieve the Transfer Function of the system.");
    EXPECT_EQ(backend.complete(r).text, backend.complete(r).text);
}

TEST(ScriptedBackend, UsageUsesCharacterEstimate) {
    ScriptedBackend backend(Script{});
    auto r = request("Planner", 0, "abcde");  // 5 chars -> 2 tokens
    r.system_text = "abcd";                   // 4 chars -> 1 token
    const auto c = backend.complete(r);
    EXPECT_EQ(c.usage.prompt_tokens, 3);
    EXPECT_EQ(c.usage.completion_tokens, estimate_tokens("Final Answer: abcde"));
    EXPECT_EQ(c.usage.estimated_cost, 0.0);
    EXPECT_GE(c.usage.wall_seconds, 0.0);
}

TEST(ScriptedBackend, PricedModelCostsTokensTimesRates) {
    ScriptedBackend backend(Script{});
    auto r = request("Planner", 0, "abcd");
    r.model_name = "gpt-4o";
    const auto c = backend.complete(r);
    const double expected = (c.usage.prompt_tokens * 2.5 + c.usage.completion_tokens * 10.0) / 1e6;
    EXPECT_DOUBLE_EQ(c.usage.estimated_cost, expected);
}

TEST(Validate, RejectsBadRequests) {
    auto r = request("Planner", 0, "q");
    r.user_text.clear();
    EXPECT_THROW(validate(r), Error);
    r = request("Planner", 0, "q");
    r.temperature = 2.5;
    EXPECT_THROW(validate(r), Error);
    r.temperature = -0.1;
    EXPECT_THROW(validate(r), Error);
    r = request("Planner", 0, "q");
    r.max_output_tokens = 0;
    EXPECT_THROW(validate(r), Error);
    EXPECT_NO_THROW(validate(request("Planner", 0, "q")));
}

TEST(EstimateTokens, CeilingOfQuarterLength) {
    EXPECT_EQ(estimate_tokens(""), 0);
    EXPECT_EQ(estimate_tokens("a"), 1);
    EXPECT_EQ(estimate_tokens("abcd"), 1);
    EXPECT_EQ(estimate_tokens("abcde"), 2);
}

}  // namespace
}  // namespace agentctl::llm
