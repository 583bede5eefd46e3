#include "agentctl/agents/registry.hpp"

#include <cctype>

#include "agentctl/error.hpp"

namespace agentctl::agents {

std::string SystemRegistry::handle_name(int k) { return "sys [" + std::to_string(k) + "]"; }

int SystemRegistry::parse_handle(std::string_view h) {
    auto skip = [&] {
        while (!h.empty() && (std::isspace(static_cast<unsigned char>(h.front())) || h.front() == '\'' ||
                              h.front() == '"' || h.front() == '$')) {
            h.remove_prefix(1);
        }
        while (!h.empty() && (std::isspace(static_cast<unsigned char>(h.back())) || h.back() == '\'' ||
                              h.back() == '"' || h.back() == '$')) {
            h.remove_suffix(1);
        }
    };
    skip();
    if (!h.starts_with("sys")) return -1;
    h.remove_prefix(3);
    skip();
    if (!h.empty() && h.front() == '[') {
        if (h.back() != ']') return -1;
        h.remove_prefix(1);
        h.remove_suffix(1);
        skip();
    }
    if (h.empty() || h.size() > 9) return -1;
    int k = 0;
    for (char c : h) {
        if (!std::isdigit(static_cast<unsigned char>(c))) return -1;
        k = k * 10 + (c - '0');
    }
    return k;
}

std::string SystemRegistry::add(control::LinearSystem sys) {
    const int k = next_++;
    systems_.emplace(k, std::move(sys));
    return handle_name(k);
}

bool SystemRegistry::contains(std::string_view handle) const {
    const int k = parse_handle(handle);
    return k >= 0 && systems_.count(k);
}

const control::LinearSystem& SystemRegistry::get(std::string_view handle) const {
    const int k = parse_handle(handle);
    if (k < 0) throw Error(ErrorCode::UnknownHandle, "'" + std::string(handle) + "' is not a system handle");
    auto it = systems_.find(k);
    if (it == systems_.end()) throw Error(ErrorCode::UnknownHandle, "no system named " + handle_name(k) + " in this session");
    return it->second;
}

}  // namespace agentctl::agents
