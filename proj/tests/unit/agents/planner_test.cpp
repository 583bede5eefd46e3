#include <gtest/gtest.h>

#include "agentctl/agents/planner.hpp"
#include "agentctl/error.hpp"

namespace agentctl::agents {
namespace {

using Tools = std::vector<std::string>;

struct Row {
    const char* input;
    const char* type;
    const char* objective;
    Tools tools;
};

class PlannerTable : public ::testing::TestWithParam<Row> {};

TEST_P(PlannerTable, Classifies) {
    const Row& r = GetParam();
    const Plan p = planner_tool(r.input);
    EXPECT_EQ(p.system_type, r.type) << r.input;
    EXPECT_EQ(p.objective, r.objective) << r.input;
    EXPECT_EQ(p.ordered_tools, r.tools) << r.input;
}

INSTANTIATE_TEST_SUITE_P(
    Queries, PlannerTable,
    ::testing::Values(
        Row{"Plot the step response for the system with num = [1, 3], den = [1, -2, -3]", "TF", "step_response",
            {"tf", "step_response"}},
        Row{"Design an LQR controller for num = [1, 3], den = [1, -2, -3] with Q = I, R = 1", "TF", "lqr",
            {"tf", "tf2ss", "lqr"}},
        Row{"Apply K to A = [[2, 3], [1, 0]], B = [[1], [0]], C = [[1, 3]], D = [[0]] and plot the step response", "SS",
            "step_response", {"ss2tf", "step_response"}},
        Row{"Use Ackermann's formula on A = [[0, 1], [-2, -3]], B = [[0], [1]] to place the poles at [-3, -4]", "SS",
            "acker", {"acker"}},
        Row{"Place the poles of A = [[0, 1], [-2, -3]], B = [[0], [1]] at [-3, -4]", "SS", "place", {"place"}},
        // the verb is gone, only the noun is left
        Row{"system with A = [[0, 1], [-2, -3]], B = [[0], [1]], poles at [-3, -4]", "SS", "poles", {"ss", "poles"}},
        Row{"Convert num = [1], den = [1, 2, 1] to state space", "TF", "tf2ss", {"tf", "tf2ss"}},
        Row{"Find the transfer function of A = [[-1]], B = [[1]], C = [[1]], D = [[0]]", "SS", "ss2tf",
            {"ss2tf"}},
        Row{"Check the stability of num = [1, 7, 10], den = [1, 3, 4, 20]", "TF", "is_stable", {"tf", "is_stable"}},
        Row{"Draw the Bode plot of num = [10], den = [1, 2, 10]", "TF", "bode", {"tf", "bode"}}));

TEST(Planner, ActionInputBeforeQuery) {
    const Plan p = planner_tool("poles of the system", "Place the poles of A = [[0]], B = [[1]] at [-1]");
    EXPECT_EQ(p.objective, "poles");
    EXPECT_EQ(p.system_type, "SS");
}

TEST(Planner, QueryFillsMissingParts) {
    const Plan p = planner_tool("system with given matrices", "Find the dc gain of num = [2], den = [1, 4]");
    EXPECT_EQ(p.objective, "dcgain");
    EXPECT_EQ(p.system_type, "TF");
}

TEST(Planner, FallbackAskedOnce) {
    int calls = 0;
    const Plan p = planner_tool("something about num = [1], den = [1, 1]", {}, [&](const Tools& vocab) {
        ++calls;
        EXPECT_FALSE(vocab.empty());
        return std::string("impulse_response");
    });
    EXPECT_EQ(calls, 1);
    EXPECT_EQ(p.objective, "impulse_response");
}

TEST(Planner, NoObjectiveIsPlanFailure) {
    try {
        planner_tool("hello there", "nothing useful", [](const Tools&) { return std::string("no idea"); });
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::PlanFailure);
    }
}

TEST(Planner, ObjectiveIsLastTool) {
    for (const auto& obj : objective_vocabulary()) {
        for (const char* type : {"TF", "SS"}) {
            const Plan p = make_plan(type, obj);
            ASSERT_FALSE(p.ordered_tools.empty()) << obj;
            EXPECT_EQ(p.ordered_tools.back(), p.objective) << obj << " on " << type;
        }
    }
}

TEST(Planner, FormatsToolIds) {
    const Plan p = make_plan("TF", "step_response");
    EXPECT_EQ(format_plan(p),
              "System Type: TF, Objective: step_response, Ordered Tools: ['control.tf', 'control.step_response']");
}

TEST(Planner, VocabularyPrecedence) {
    EXPECT_EQ(find_objective("root locus of the plant"), "root_locus");
    EXPECT_EQ(find_objective("nothing"), std::nullopt);
    EXPECT_EQ(find_representation("A = [[1]]"), "SS");
    EXPECT_EQ(find_representation("num = [1], den = [1, 1]"), "TF");
    EXPECT_EQ(find_representation("a plant"), std::nullopt);
}

}  // namespace
}  // namespace agentctl::agents
