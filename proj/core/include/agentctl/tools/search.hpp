#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace agentctl::tools {

struct SearchResult {
    std::string source;
    std::string snippet;
};

class SearchClient {
public:
    virtual ~SearchClient() = default;
    virtual std::vector<SearchResult> search(std::string_view query, std::size_t k) = 0;
};

// Offline results keyed by query. Lookup is exact on the normalized query,
// then the fixture sharing the most key terms.
class FixtureSearch : public SearchClient {
public:
    // {"<query>": [{"source": ..., "snippet": ...}, ...], ...}
    static FixtureSearch from_json(const nlohmann::json& j);
    static FixtureSearch load(const std::filesystem::path& path);

    void add(std::string query, std::vector<SearchResult> results);
    std::vector<SearchResult> search(std::string_view query, std::size_t k) override;

private:
    std::map<std::string, std::vector<SearchResult>> fixtures_;
};

// GET <url>?q=<query>&k=<k>, expecting a JSON array of {source, snippet}.
class HttpSearch : public SearchClient {
public:
    explicit HttpSearch(std::string url);
    std::vector<SearchResult> search(std::string_view query, std::size_t k) override;

private:
    std::string url_;
};

// SearchUnavailable when no client is configured.
std::vector<SearchResult> search_tool(std::string_view query, SearchClient* client, std::size_t k = 3);
std::string format_search(const std::vector<SearchResult>& results);

}  // namespace agentctl::tools
