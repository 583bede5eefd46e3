#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

namespace agentctl::agents {

// Substitutes {name}, {map[key]} and
// {%- for x in list %} ... {%- endfor %} blocks. "{%-" trims whitespace
// before the tag and "-%}" after it; "{{" and "}}" are literal braces.
// Strings render as-is, arrays of strings joined by ", ".
// TemplateError on an unbound name or a malformed block.
std::string render_prompt(std::string_view tmpl, const nlohmann::json& slots);

// Prompt text assets for one version. The builtin set is compiled in;
// load() reads the same layout from a directory.
class PromptLibrary {
public:
    static const PromptLibrary& builtin();
    static PromptLibrary load(const std::filesystem::path& dir);

    const std::string& version() const noexcept { return version_; }
    // TemplateError when the asset is missing.
    const std::string& get(const std::string& name) const;
    bool has(const std::string& name) const { return files_.count(name) > 0; }

    // prefix + format instruction + suffix for a ReAct node ("controller").
    std::string node_template(const std::string& node) const;
    std::string supervisor_template() const;
    std::string routing_template() const;

private:
    std::string version_;
    std::map<std::string, std::string> files_;
};

}  // namespace agentctl::agents
