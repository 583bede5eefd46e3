#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace agentctl::tools {

struct DebugContext {
    // Tool whose call failed, if any.
    std::string tool;
    // Tool ids the failing node may call.
    std::vector<std::string> registry;
};

struct DebugAdvice {
    std::string error_class;
    std::string text;
    // False when the error class has no rule and generic advice was given.
    bool known = false;
};

// Error text is expected as "<Class>: <detail>", as produced by Error::what().
DebugAdvice debug_advise(std::string_view error_text, const DebugContext& context = {});

}  // namespace agentctl::tools
