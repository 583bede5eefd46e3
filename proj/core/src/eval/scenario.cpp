#include "agentctl/eval/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include "agentctl/error.hpp"
#include "agentctl/metrics/failures.hpp"

namespace agentctl::eval {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

[[noreturn]] void schema_error(const std::string& where, const std::string& what) {
    throw Error(ErrorCode::ScenarioError, where + ": " + what);
}

std::string read_text(const fs::path& path, const std::string& where) {
    std::ifstream in(path, std::ios::binary);
    if (!in) schema_error(where, "cannot read " + path.string());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

fs::path resolve(const fs::path& base, const std::string& p) {
    fs::path path(p);
    return path.is_absolute() || base.empty() ? path : base / path;
}

std::string required_string(const json& j, const std::string& key, const std::string& where) {
    if (!j.contains(key)) schema_error(where + "." + key, "required");
    if (!j[key].is_string() || j[key].get<std::string>().empty()) schema_error(where + "." + key, "expected a nonempty string");
    return j[key].get<std::string>();
}

std::vector<std::string> string_array(const json& j, const std::string& where) {
    if (!j.is_array()) schema_error(where, "expected an array of strings");
    std::vector<std::string> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_string()) schema_error(where + "[" + std::to_string(i) + "]", "expected a string");
        out.push_back(j[i].get<std::string>());
    }
    return out;
}

Turn parse_turn(const json& j, const std::string& where) {
    Turn t;
    t.query = required_string(j, "query", where);
    if (!j.contains("ground_truth")) schema_error(where + ".ground_truth", "required");
    t.truth = metrics::ground_truth_from_json(j["ground_truth"], where + ".ground_truth");
    if (j.contains("replies")) t.replies = string_array(j["replies"], where + ".replies");
    return t;
}

Scenario parse_one(const json& j, const fs::path& base, const std::string& where) {
    static const std::set<std::string> known = {"id",     "category",        "backend",          "query",
                                                "ground_truth", "replies",   "turns",            "script",
                                                "memory_seed",  "critic_threshold", "corpus",   "search_fixtures",
                                                "expected_failure", "description"};
    if (!j.is_object()) schema_error(where, "expected an object");
    for (const auto& [key, value] : j.items()) {
        if (!known.count(key)) schema_error(where + "." + key, "unknown field");
    }
    Scenario s;
    s.id = required_string(j, "id", where);
    const std::string cat = required_string(j, "category", where);
    auto c = category_from_string(cat);
    if (!c) schema_error(where + ".category", "unknown category '" + cat + "'");
    s.category = *c;

    if (j.contains("backend")) {
        s.backend = required_string(j, "backend", where);
        if (s.backend != "scripted" && s.backend != "http") schema_error(where + ".backend", "expected scripted or http");
    }

    if (j.contains("turns")) {
        if (j.contains("query") || j.contains("ground_truth") || j.contains("replies")) {
            schema_error(where + ".turns", "give either turns or a single query, not both");
        }
        if (!j["turns"].is_array() || j["turns"].empty()) schema_error(where + ".turns", "expected a nonempty array");
        for (std::size_t i = 0; i < j["turns"].size(); ++i) {
            s.turns.push_back(parse_turn(j["turns"][i], where + ".turns[" + std::to_string(i) + "]"));
        }
    } else {
        s.turns.push_back(parse_turn(j, where));
    }

    if (j.contains("script")) {
        const auto& sc = j["script"];
        if (sc.is_string()) {
            s.script = read_text(resolve(base, sc.get<std::string>()), where + ".script");
        } else if (sc.is_array()) {
            for (const auto& line : string_array(sc, where + ".script")) s.script += line + "\n";
        } else {
            schema_error(where + ".script", "expected a file name or an array of lines");
        }
    } else if (s.backend == "scripted") {
        schema_error(where + ".script", "required for the scripted backend");
    }

    if (j.contains("memory_seed")) {
        const auto& ms = j["memory_seed"];
        if (!ms.is_array()) schema_error(where + ".memory_seed", "expected an array");
        for (std::size_t i = 0; i < ms.size(); ++i) {
            const std::string at = where + ".memory_seed[" + std::to_string(i) + "]";
            if (!ms[i].is_object()) schema_error(at, "expected an object");
            const std::string q = required_string(ms[i], "query", at);
            const std::string tr = required_string(ms[i], "transcript", at);
            const std::string ans = required_string(ms[i], "answer", at);
            s.memory_seed.push_back(tools::make_record(q, tr, ans, 0));
        }
    }
    if (j.contains("critic_threshold")) {
        const auto& t = j["critic_threshold"];
        if (!t.is_number() || t.get<double>() < 0.0 || t.get<double>() > 1.0) {
            schema_error(where + ".critic_threshold", "expected a number in [0, 1]");
        }
        s.critic_threshold = t.get<double>();
    }
    if (j.contains("corpus")) {
        for (const auto& p : string_array(j["corpus"], where + ".corpus")) s.corpus.push_back(resolve(base, p));
    }
    if (j.contains("search_fixtures")) {
        s.search_fixtures = resolve(base, required_string(j, "search_fixtures", where));
    }
    if (j.contains("expected_failure")) {
        const std::string f = required_string(j, "expected_failure", where);
        if (!metrics::failure_kind_from_string(f)) schema_error(where + ".expected_failure", "unknown failure kind '" + f + "'");
        s.expected_failure = f;
    }
    return s;
}

}  // namespace

std::string_view to_string(Category c) noexcept {
    switch (c) {
        case Category::SystemRepresentation: return "SystemRepresentation";
        case Category::ControlAnalysis: return "ControlAnalysis";
        case Category::ControllerDesign: return "ControllerDesign";
        case Category::TimeDomainSimulation: return "TimeDomainSimulation";
    }
    return "SystemRepresentation";
}

std::string_view display_name(Category c) noexcept {
    switch (c) {
        case Category::SystemRepresentation: return "System Representation";
        case Category::ControlAnalysis: return "Control Analysis";
        case Category::ControllerDesign: return "Controller Design";
        case Category::TimeDomainSimulation: return "Time Domain Simulation";
    }
    return "System Representation";
}

std::optional<Category> category_from_string(std::string_view name) noexcept {
    for (Category c : kCategories) {
        if (name == to_string(c) || name == display_name(c)) return c;
    }
    return std::nullopt;
}

std::vector<Scenario> parse_scenarios(const json& j, const fs::path& base_dir) {
    if (j.is_null()) schema_error("scenarios", "file is empty");
    if (!j.is_object() || !j.contains("scenarios")) schema_error("scenarios", "required");
    const auto& list = j["scenarios"];
    if (!list.is_array() || list.empty()) schema_error("scenarios", "expected a nonempty array");
    std::vector<Scenario> out;
    std::set<std::string> ids;
    for (std::size_t i = 0; i < list.size(); ++i) {
        const std::string where = "scenarios[" + std::to_string(i) + "]";
        Scenario s = parse_one(list[i], base_dir, where);
        if (!ids.insert(s.id).second) schema_error(where + ".id", "duplicate id '" + s.id + "'");
        out.push_back(std::move(s));
    }
    return out;
}

std::vector<Scenario> load_scenarios(const fs::path& path) {
    const std::string text = read_text(path, "scenarios");
    if (text.find_first_not_of(" \t\r\n") == std::string::npos) schema_error("scenarios", path.string() + " is empty");
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        schema_error("scenarios", path.string() + ": " + e.what());
    }
    return parse_scenarios(j, path.parent_path());
}

std::vector<Scenario> load_scenario_set(const fs::path& path) {
    std::error_code ec;
    if (!fs::is_directory(path, ec)) return load_scenarios(path);
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(path, ec)) {
        if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) schema_error("scenarios", "no .json files in " + path.string());
    std::vector<Scenario> out;
    std::set<std::string> ids;
    for (const auto& f : files) {
        for (auto& s : load_scenarios(f)) {
            if (!ids.insert(s.id).second) schema_error(f.filename().string() + ": " + s.id, "duplicate id");
            out.push_back(std::move(s));
        }
    }
    return out;
}

}  // namespace agentctl::eval
