#pragma once

#include <string>
#include <string_view>

namespace agentctl::tools {

inline constexpr double kDefaultCriticThreshold = 0.5;

struct CriticVerdict {
    double similarity = 0.0;
    bool accepted = false;
    double threshold = kDefaultCriticThreshold;
};

// Lexical cosine between query and answer; ValidationError on empty input.
CriticVerdict critic_tool(std::string_view query, std::string_view answer,
                          double threshold = kDefaultCriticThreshold);

std::string critic_observation(const CriticVerdict& verdict);

}  // namespace agentctl::tools
