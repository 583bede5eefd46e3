#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace agentctl::tools {

// Lowercased tokens matching [a-z0-9]+(\.[0-9]+)?, so "6.16" stays one token.
std::vector<std::string> tokenize(std::string_view text);

bool is_stopword(std::string_view token);

// Unique non-stopword tokens, sorted.
std::vector<std::string> key_terms(std::string_view text);

// Cosine of the token-frequency vectors; 0 when either side has no tokens.
double lexical_cosine(std::string_view a, std::string_view b);

}  // namespace agentctl::tools
