#pragma once

#include <string>
#include <string_view>

namespace agentctl::tools {

// Pluggable delivery modes without an implementation; both raise
// NotImplemented.
std::string speech_tool(std::string_view text);
std::string translate_tool(std::string_view text, std::string_view language);

}  // namespace agentctl::tools
