#include "agentctl/tools/text.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <map>

namespace agentctl::tools {

namespace {

constexpr std::array<std::string_view, 64> kStopwords{
    "a",     "about", "after", "all",   "also",  "an",    "and",  "any",  "are",  "as",    "at",
    "be",    "been",  "but",   "by",    "can",   "could", "do",   "does", "for",  "from",  "has",
    "have",  "how",   "i",     "if",    "in",    "into",  "is",   "it",   "its",  "me",    "my",
    "of",    "on",    "or",    "our",   "please", "should", "so", "such", "that", "the",   "their",
    "then",  "there", "these", "this",  "those", "to",    "was",  "we",   "were", "what",  "when",
    "which", "while", "who",   "will",  "with",  "would", "you",  "your", "them",
};

bool alnum(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; }
bool digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> out;
    std::size_t i = 0;
    while (i < text.size()) {
        if (!alnum(text[i])) {
            ++i;
            continue;
        }
        std::string tok;
        while (i < text.size() && alnum(text[i])) tok += static_cast<char>(std::tolower(static_cast<unsigned char>(text[i++])));
        if (i + 1 < text.size() && text[i] == '.' && digit(text[i + 1])) {
            tok += '.';
            ++i;
            while (i < text.size() && digit(text[i])) tok += text[i++];
        }
        out.push_back(std::move(tok));
    }
    return out;
}

bool is_stopword(std::string_view token) {
    return std::find(kStopwords.begin(), kStopwords.end(), token) != kStopwords.end();
}

std::vector<std::string> key_terms(std::string_view text) {
    auto toks = tokenize(text);
    std::erase_if(toks, [](const std::string& t) { return is_stopword(t); });
    std::sort(toks.begin(), toks.end());
    toks.erase(std::unique(toks.begin(), toks.end()), toks.end());
    return toks;
}

double lexical_cosine(std::string_view a, std::string_view b) {
    std::map<std::string, double> fa, fb;
    for (auto& t : tokenize(a)) fa[t] += 1.0;
    for (auto& t : tokenize(b)) fb[t] += 1.0;
    if (fa.empty() || fb.empty()) return 0.0;
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (const auto& [t, x] : fa) {
        na += x * x;
        if (auto it = fb.find(t); it != fb.end()) dot += x * it->second;
    }
    for (const auto& [t, y] : fb) nb += y * y;
    return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), 0.0, 1.0);
}

}  // namespace agentctl::tools
