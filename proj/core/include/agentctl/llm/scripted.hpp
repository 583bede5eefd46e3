#pragma once

#include <atomic>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>

#include "agentctl/llm/backend.hpp"
#include "agentctl/llm/pricing.hpp"

namespace agentctl::llm {

struct Fingerprint {
    std::string node;
    int step = 0;
    // digest() of the trimmed latest user message.
    std::string message_hash;

    auto operator<=>(const Fingerprint&) const = default;
};

std::string message_hash(std::string_view message);
Fingerprint fingerprint_of(const CompletionRequest& request);

// Script text format:
//
//   # comment
//   query <label> = <text>              bind a label to hash(<text>)
//   @ <Node> <step> <label|#hash|*>     start a completion block
//   ...body lines...
//   @end                                close the block (optional before
//                                       the next '@' header)
//
// '*' matches any message for that node and step. Exact entries win over
// wildcards.
class Script {
public:
    static Script parse(std::string_view text);
    static Script load(const std::filesystem::path& path);

    void add(Fingerprint fp, std::string text);
    void add_wildcard(std::string node, int step, std::string text);
    std::optional<std::string> lookup(const Fingerprint& fp) const;

    std::size_t size() const noexcept { return exact_.size() + wildcard_.size(); }
    const std::map<std::string, std::string>& labels() const noexcept { return labels_; }

private:
    std::map<Fingerprint, std::string> exact_;
    std::map<std::pair<std::string, int>, std::string> wildcard_;
    std::map<std::string, std::string> labels_;
};

class ScriptedBackend : public Backend {
public:
    explicit ScriptedBackend(Script script, PriceTable prices = PriceTable::presets());

    // Unknown fingerprints answer "Final Answer: <latest user message>".
    Completion complete(const CompletionRequest& request) override;
    std::string_view name() const noexcept override { return "scripted"; }

    std::string lookup(const Fingerprint& fp, std::string_view latest_user_message) const;
    std::size_t misses() const noexcept { return misses_.load(); }
    const Script& script() const noexcept { return script_; }

private:
    Script script_;
    PriceTable prices_;
    std::atomic<std::size_t> misses_{0};
};

}  // namespace agentctl::llm
