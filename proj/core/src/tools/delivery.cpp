#include "agentctl/tools/delivery.hpp"

#include "agentctl/error.hpp"

namespace agentctl::tools {

std::string speech_tool(std::string_view) {
    throw Error(ErrorCode::NotImplemented, "speech delivery is not available in this build");
}

std::string translate_tool(std::string_view, std::string_view language) {
    throw Error(ErrorCode::NotImplemented, "translation to '" + std::string(language) + "' is not available in this build");
}

}  // namespace agentctl::tools
