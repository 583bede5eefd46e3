#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "agentctl/error.hpp"
#include "agentctl/eval/scenario.hpp"

namespace agentctl::eval {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

const fs::path kData = AGENTCTL_DATA_DIR;

std::string schema_message(const json& j) {
    try {
        parse_scenarios(j);
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::ScenarioError);
        return e.what();
    }
    ADD_FAILURE() << "accepted " << j.dump();
    return {};
}

json minimal(const std::string& id) {
    return {{"id", id},
            {"category", "ControllerDesign"},
            {"query", "Use acker on A = [[0, 1], [-2, -3]], B = [[0], [1]] with poles [-3, -4]"},
            {"script", json::array({"@ Controller 0 *", "Final Answer: K = [[10, 4]]"})},
            {"ground_truth",
             {{"answer", json::array({{{"numeric", {10, 4}}}})},
              {"agents", {"Supervisor", "Planner", "Controller"}},
              {"plan", json::array({"acker"})}}}};
}

TEST(Scenario, MinimalParses) {
    const auto set = parse_scenarios({{"scenarios", json::array({minimal("a")})}});
    ASSERT_EQ(set.size(), 1u);
    EXPECT_EQ(set[0].category, Category::ControllerDesign);
    ASSERT_EQ(set[0].turns.size(), 1u);
    EXPECT_EQ(set[0].turns[0].truth.plan, (std::vector<std::string>{"acker"}));
    EXPECT_NE(set[0].script.find("K = [[10, 4]]"), std::string::npos);
}

TEST(Scenario, ErrorsCarryFieldPath) {
    json bad = minimal("b");
    bad["bogus"] = 1;
    EXPECT_NE(schema_message({{"scenarios", json::array({minimal("a"), bad})}}).find("scenarios[1].bogus"), std::string::npos);

    json no_cat = minimal("c");
    no_cat["category"] = "Robotics";
    EXPECT_NE(schema_message({{"scenarios", json::array({no_cat})}}).find("scenarios[0].category"), std::string::npos);

    json thr = minimal("d");
    thr["critic_threshold"] = 2;
    EXPECT_NE(schema_message({{"scenarios", json::array({thr})}}).find("critic_threshold"), std::string::npos);

    json fail = minimal("e");
    fail["expected_failure"] = "CosmicRay";
    EXPECT_NE(schema_message({{"scenarios", json::array({fail})}}).find("expected_failure"), std::string::npos);

    json both = minimal("f");
    both["turns"] = json::array();
    EXPECT_NE(schema_message({{"scenarios", json::array({both})}}).find("scenarios[0].turns"), std::string::npos);
}

TEST(Scenario, DuplicateIdsAndEmptyInputs) {
    EXPECT_NE(schema_message({{"scenarios", json::array({minimal("a"), minimal("a")})}}).find("duplicate id 'a'"), std::string::npos);
    EXPECT_FALSE(schema_message({{"scenarios", json::array()}}).empty());
    EXPECT_FALSE(schema_message(json()).empty());

    const fs::path empty = fs::temp_directory_path() / "agentctl_empty_scenarios.json";
    std::ofstream(empty) << "  \n";
    try {
        load_scenarios(empty);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::ScenarioError);
    }
    fs::remove(empty);
}

TEST(Scenario, ScriptedBackendNeedsScript) {
    json s = minimal("a");
    s.erase("script");
    EXPECT_NE(schema_message({{"scenarios", json::array({s})}}).find("scenarios[0].script"), std::string::npos);
    s["backend"] = "http";
    EXPECT_NO_THROW(parse_scenarios({{"scenarios", json::array({s})}}));
}

TEST(Scenario, ShippedSuiteHasFourPerCategory) {
    const auto set = load_scenario_set(kData / "scenarios" / "suite");
    ASSERT_EQ(set.size(), 16u);
    for (Category c : kCategories) {
        EXPECT_EQ(std::count_if(set.begin(), set.end(), [c](const Scenario& s) { return s.category == c; }), 4)
            << to_string(c);
    }
}

TEST(Scenario, GoldenSessionHasFourTurns) {
    const auto set = load_scenario_set(kData / "scenarios" / "golden");
    ASSERT_EQ(set.size(), 1u);
    EXPECT_EQ(set[0].turns.size(), 4u);
    ASSERT_EQ(set[0].corpus.size(), 1u);
    EXPECT_TRUE(fs::exists(set[0].corpus[0]));
}

TEST(Scenario, CategoryNames) {
    for (Category c : kCategories) {
        EXPECT_EQ(category_from_string(to_string(c)), c);
        EXPECT_EQ(category_from_string(display_name(c)), c);
    }
    EXPECT_EQ(category_from_string("Overall"), std::nullopt);
}

}  // namespace
}  // namespace agentctl::eval
