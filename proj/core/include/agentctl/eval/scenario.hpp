#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "agentctl/metrics/ground_truth.hpp"
#include "agentctl/tools/memory.hpp"

namespace agentctl::eval {

enum class Category { SystemRepresentation, ControlAnalysis, ControllerDesign, TimeDomainSimulation };

inline constexpr Category kCategories[] = {Category::SystemRepresentation, Category::ControlAnalysis,
                                           Category::ControllerDesign, Category::TimeDomainSimulation};

std::string_view to_string(Category c) noexcept;
// Row label used in reports, e.g. "Controller Design".
std::string_view display_name(Category c) noexcept;
std::optional<Category> category_from_string(std::string_view name) noexcept;

struct Turn {
    std::string query;
    metrics::GroundTruth truth;
    // Answers fed to human_tool, in order.
    std::vector<std::string> replies;
};

struct Scenario {
    std::string id;
    Category category = Category::SystemRepresentation;
    std::vector<Turn> turns;
    // Scripted-backend text (see llm::Script).
    std::string script;
    std::vector<tools::MemoryRecord> memory_seed;
    std::optional<double> critic_threshold;
    std::vector<std::filesystem::path> corpus;
    std::optional<std::filesystem::path> search_fixtures;
    std::string backend = "scripted";
    // Failure class the scenario is built to show, for regression fixtures.
    std::optional<std::string> expected_failure;
};

// Schema (paths relative to the file):
// {"scenarios": [{
//    "id", "category", "backend"?: "scripted"|"http",
//    "query" + "ground_truth" + "replies"?  or  "turns": [{"query", "ground_truth", "replies"?}],
//    "script": "<file>" | ["line", ...],
//    "memory_seed"?: [{"query", "transcript", "answer"}],
//    "critic_threshold"?: number, "corpus"?: ["<file>"], "search_fixtures"?: "<file>",
//    "expected_failure"?: "<FailureKind>"}]}
// ScenarioError with a field path for every violation, an empty file or
// list, and duplicate ids.
std::vector<Scenario> parse_scenarios(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
std::vector<Scenario> load_scenarios(const std::filesystem::path& path);

// A file, or every *.json file of a directory in sorted order.
std::vector<Scenario> load_scenario_set(const std::filesystem::path& path);

}  // namespace agentctl::eval
