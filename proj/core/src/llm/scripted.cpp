#include "agentctl/llm/scripted.hpp"

#include <chrono>
#include <fstream>
#include <sstream>
#include <vector>

#include "agentctl/error.hpp"
#include "agentctl/trace/event.hpp"

namespace agentctl::llm {

namespace {

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_ws(std::string_view s) {
    std::vector<std::string> out;
    std::istringstream in{std::string(s)};
    std::string word;
    while (in >> word) out.push_back(word);
    return out;
}

[[noreturn]] void script_error(std::size_t line, const std::string& what) {
    throw Error(ErrorCode::ValidationError, "script line " + std::to_string(line) + ": " + what);
}

struct PendingBlock {
    std::string node;
    int step = 0;
    std::string key;
    std::size_t line = 0;
    std::vector<std::string> body;
};

}  // namespace

std::string message_hash(std::string_view message) { return trace::digest(trim(message)); }

Fingerprint fingerprint_of(const CompletionRequest& request) {
    return {request.node, request.step, message_hash(request.latest_user_message)};
}

Script Script::parse(std::string_view text) {
    Script script;
    std::optional<PendingBlock> block;

    auto flush = [&]() {
        if (!block) return;
        while (!block->body.empty() && trim(block->body.back()).empty()) block->body.pop_back();
        std::string body;
        for (std::size_t i = 0; i < block->body.size(); ++i) {
            if (i) body += '\n';
            body += block->body[i];
        }
        if (block->key == "*") {
            script.add_wildcard(block->node, block->step, std::move(body));
        } else if (block->key.starts_with('#')) {
            script.add({block->node, block->step, block->key.substr(1)}, std::move(body));
        } else {
            auto it = script.labels_.find(block->key);
            if (it == script.labels_.end()) script_error(block->line, "unknown query label '" + block->key + "'");
            script.add({block->node, block->step, it->second}, std::move(body));
        }
        block.reset();
    };

    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line == "@end") {
            flush();
            continue;
        }
        if (line.starts_with("@ ")) {
            flush();
            const auto parts = split_ws(std::string_view(line).substr(2));
            if (parts.size() != 3) script_error(line_no, "block header needs <node> <step> <key>");
            PendingBlock b;
            b.node = parts[0];
            try {
                std::size_t used = 0;
                b.step = std::stoi(parts[1], &used);
                if (used != parts[1].size() || b.step < 0) throw std::invalid_argument("step");
            } catch (const std::exception&) {
                script_error(line_no, "step must be a nonnegative integer");
            }
            b.key = parts[2];
            b.line = line_no;
            block = std::move(b);
            continue;
        }
        if (block) {
            block->body.push_back(line);
            continue;
        }
        const std::string_view t = trim(line);
        if (t.empty() || t.starts_with('#')) continue;
        if (t.starts_with("query ")) {
            const auto eq = t.find('=');
            if (eq == std::string_view::npos) script_error(line_no, "query line needs '='");
            const std::string label(trim(t.substr(6, eq - 6)));
            if (label.empty() || label.find(' ') != std::string::npos) script_error(line_no, "bad query label");
            script.labels_[label] = message_hash(t.substr(eq + 1));
            continue;
        }
        script_error(line_no, "unexpected text outside a block");
    }
    flush();
    return script;
}

Script Script::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::ValidationError, "cannot read script " + path.string());
    std::ostringstream os;
    os << in.rdbuf();
    return parse(os.str());
}

void Script::add(Fingerprint fp, std::string text) { exact_[std::move(fp)] = std::move(text); }

void Script::add_wildcard(std::string node, int step, std::string text) {
    wildcard_[{std::move(node), step}] = std::move(text);
}

std::optional<std::string> Script::lookup(const Fingerprint& fp) const {
    if (auto it = exact_.find(fp); it != exact_.end()) return it->second;
    if (auto it = wildcard_.find({fp.node, fp.step}); it != wildcard_.end()) return it->second;
    return std::nullopt;
}

ScriptedBackend::ScriptedBackend(Script script, PriceTable prices)
    : script_(std::move(script)), prices_(std::move(prices)) {}

std::string ScriptedBackend::lookup(const Fingerprint& fp, std::string_view latest_user_message) const {
    if (auto hit = script_.lookup(fp)) return *hit;
    return "Final Answer: " + std::string(trim(latest_user_message));
}

Completion ScriptedBackend::complete(const CompletionRequest& request) {
    validate(request);
    const auto start = std::chrono::steady_clock::now();
    const Fingerprint fp = fingerprint_of(request);
    auto hit = script_.lookup(fp);
    if (!hit) ++misses_;
    Completion out;
    out.text = hit ? *hit : lookup(fp, request.latest_user_message);
    out.usage.prompt_tokens = estimate_tokens(request.system_text) + estimate_tokens(request.user_text);
    out.usage.completion_tokens = estimate_tokens(out.text);
    out.usage.estimated_cost = prices_.cost(request.model_name, out.usage.prompt_tokens, out.usage.completion_tokens);
    out.usage.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return out;
}

}  // namespace agentctl::llm
