#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

namespace agentctl::llm {

// Currency units per one million tokens.
struct ModelPrice {
    double input_per_million = 0.0;
    double output_per_million = 0.0;
};

class PriceTable {
public:
    // gpt-3.5-turbo, gpt-4o, deepseek-v3, claude-3.7-sonnet and scripted.
    static PriceTable presets();
    // {"model": {"input": x, "output": y}, ...}
    static PriceTable from_json(const nlohmann::json& j);
    static PriceTable load(const std::filesystem::path& path);

    void set(const std::string& model, ModelPrice price);
    std::optional<ModelPrice> find(const std::string& model) const;
    // Unknown models cost nothing.
    double cost(const std::string& model, std::int64_t prompt_tokens, std::int64_t completion_tokens) const;

    const std::map<std::string, ModelPrice>& entries() const noexcept { return prices_; }

private:
    std::map<std::string, ModelPrice> prices_;
};

}  // namespace agentctl::llm
