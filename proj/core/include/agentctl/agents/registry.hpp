#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <string_view>

#include "agentctl/control/linear_system.hpp"

namespace agentctl::agents {

// Session-scoped store of systems created by tools. Handles are "sys [k]"
// with k increasing from 1 and never reused.
class SystemRegistry {
public:
    std::string add(control::LinearSystem sys);

    // Accepts "sys [7]", "sys[7]", "sys7" and "sys 7". UnknownHandle
    // otherwise.
    const control::LinearSystem& get(std::string_view handle) const;
    bool contains(std::string_view handle) const;

    std::size_t size() const noexcept { return systems_.size(); }
    int last_index() const noexcept { return next_ - 1; }

    static std::string handle_name(int k);
    // k for a well-formed handle, -1 otherwise.
    static int parse_handle(std::string_view handle);

private:
    std::map<int, control::LinearSystem> systems_;
    int next_ = 1;
};

}  // namespace agentctl::agents
