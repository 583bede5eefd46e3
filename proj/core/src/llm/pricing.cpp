#include "agentctl/llm/pricing.hpp"

#include <fstream>

#include "agentctl/error.hpp"

namespace agentctl::llm {

PriceTable PriceTable::presets() {
    PriceTable t;
    t.set("gpt-3.5-turbo", {0.5, 1.5});
    t.set("gpt-4o", {2.5, 10.0});
    t.set("deepseek-v3", {0.27, 1.10});
    t.set("claude-3.7-sonnet", {3.0, 15.0});
    t.set("scripted", {0.0, 0.0});
    return t;
}

PriceTable PriceTable::from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw Error(ErrorCode::ValidationError, "price table must be a JSON object");
    PriceTable t;
    for (const auto& [model, entry] : j.items()) {
        if (!entry.is_object() || !entry.contains("input") || !entry.contains("output") ||
            !entry["input"].is_number() || !entry["output"].is_number()) {
            throw Error(ErrorCode::ValidationError, "price entry '" + model + "' needs numeric input and output");
        }
        const ModelPrice p{entry["input"].get<double>(), entry["output"].get<double>()};
        if (p.input_per_million < 0.0 || p.output_per_million < 0.0) {
            throw Error(ErrorCode::ValidationError, "price entry '" + model + "' is negative");
        }
        t.set(model, p);
    }
    return t;
}

PriceTable PriceTable::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::ValidationError, "cannot read price table " + path.string());
    try {
        return from_json(nlohmann::json::parse(in));
    } catch (const nlohmann::json::parse_error& ex) {
        throw Error(ErrorCode::ValidationError, path.string() + ": " + ex.what());
    }
}

void PriceTable::set(const std::string& model, ModelPrice price) { prices_[model] = price; }

std::optional<ModelPrice> PriceTable::find(const std::string& model) const {
    auto it = prices_.find(model);
    if (it == prices_.end()) return std::nullopt;
    return it->second;
}

double PriceTable::cost(const std::string& model, std::int64_t prompt_tokens, std::int64_t completion_tokens) const {
    const auto p = find(model);
    if (!p) return 0.0;
    return (static_cast<double>(prompt_tokens) * p->input_per_million +
            static_cast<double>(completion_tokens) * p->output_per_million) /
           1e6;
}

}  // namespace agentctl::llm
