#include "agentctl/tools/critic.hpp"

#include <cstdio>

#include "agentctl/error.hpp"
#include "agentctl/tools/text.hpp"

namespace agentctl::tools {

CriticVerdict critic_tool(std::string_view query, std::string_view answer, double threshold) {
    if (query.empty() || answer.empty()) throw Error(ErrorCode::ValidationError, "critic needs a query and an answer");
    CriticVerdict v;
    v.similarity = lexical_cosine(query, answer);
    v.threshold = threshold;
    v.accepted = v.similarity >= threshold;
    return v;
}

std::string critic_observation(const CriticVerdict& verdict) {
    char score[32];
    std::snprintf(score, sizeof score, "%.2f", verdict.similarity);
    if (verdict.accepted) return std::string("The output is aligned with the input. Similarity score: ") + score + ".";
    return std::string("The output does not align with the input. Similarity score: ") + score +
           " (back to controller agent)";
}

}  // namespace agentctl::tools
