#include "agentctl/tools/search.hpp"

#include <algorithm>
#include <fstream>

#include <httplib.h>

#include "agentctl/error.hpp"
#include "agentctl/tools/text.hpp"

namespace agentctl::tools {

namespace {

std::string normalize(std::string_view q) {
    std::string out;
    for (const auto& t : tokenize(q)) {
        if (!out.empty()) out += ' ';
        out += t;
    }
    return out;
}

std::vector<SearchResult> parse_results(const nlohmann::json& arr, const std::string& where) {
    if (!arr.is_array()) throw Error(ErrorCode::ValidationError, where + ": results must be an array");
    std::vector<SearchResult> out;
    for (const auto& item : arr) {
        if (!item.is_object()) throw Error(ErrorCode::ValidationError, where + ": result must be an object");
        SearchResult r{item.value("source", std::string{}), item.value("snippet", std::string{})};
        if (r.source.empty()) throw Error(ErrorCode::ValidationError, where + ": result lacks a source label");
        if (r.snippet.empty()) throw Error(ErrorCode::ValidationError, where + ": result lacks a snippet");
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace

FixtureSearch FixtureSearch::from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw Error(ErrorCode::ValidationError, "search fixtures must be a JSON object");
    FixtureSearch f;
    for (const auto& [query, results] : j.items()) f.add(query, parse_results(results, "fixture '" + query + "'"));
    return f;
}

FixtureSearch FixtureSearch::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::ValidationError, "cannot read search fixtures " + path.string());
    try {
        return from_json(nlohmann::json::parse(in));
    } catch (const nlohmann::json::parse_error& ex) {
        throw Error(ErrorCode::ValidationError, path.string() + ": " + ex.what());
    }
}

void FixtureSearch::add(std::string query, std::vector<SearchResult> results) {
    fixtures_[normalize(query)] = std::move(results);
}

std::vector<SearchResult> FixtureSearch::search(std::string_view query, std::size_t k) {
    const std::vector<SearchResult>* best = nullptr;
    if (auto it = fixtures_.find(normalize(query)); it != fixtures_.end()) {
        best = &it->second;
    } else {
        const auto q = key_terms(query);
        std::size_t best_overlap = 0;
        for (const auto& [key, results] : fixtures_) {
            const auto terms = key_terms(key);
            std::size_t overlap = 0;
            for (const auto& t : terms) overlap += std::binary_search(q.begin(), q.end(), t) ? 1 : 0;
            if (overlap > best_overlap) {
                best_overlap = overlap;
                best = &results;
            }
        }
    }
    if (!best) return {};
    return {best->begin(), best->begin() + static_cast<std::ptrdiff_t>(std::min(k, best->size()))};
}

HttpSearch::HttpSearch(std::string url) : url_(std::move(url)) {}

std::vector<SearchResult> HttpSearch::search(std::string_view query, std::size_t k) {
    const auto scheme_end = url_.find("://");
    const auto path_start = scheme_end == std::string::npos ? std::string::npos : url_.find('/', scheme_end + 3);
    const std::string origin = url_.substr(0, path_start);
    const std::string path = path_start == std::string::npos ? "/" : url_.substr(path_start);
    httplib::Client client(origin);
    client.set_read_timeout(10, 0);
    const httplib::Params params{{"q", std::string(query)}, {"k", std::to_string(k)}};
    auto res = client.Get(path, params, httplib::Headers{});
    if (!res) throw Error(ErrorCode::SearchUnavailable, "search endpoint unreachable: " + httplib::to_string(res.error()));
    if (res->status != 200) throw Error(ErrorCode::SearchUnavailable, "search endpoint returned HTTP " + std::to_string(res->status));
    try {
        auto out = parse_results(nlohmann::json::parse(res->body), "search response");
        if (out.size() > k) out.resize(k);
        return out;
    } catch (const nlohmann::json::exception& ex) {
        throw Error(ErrorCode::SearchUnavailable, std::string("malformed search response: ") + ex.what());
    }
}

std::vector<SearchResult> search_tool(std::string_view query, SearchClient* client, std::size_t k) {
    if (!client) throw Error(ErrorCode::SearchUnavailable, "no search client or fixture set is configured");
    return client->search(query, k);
}

std::string format_search(const std::vector<SearchResult>& results) {
    if (results.empty()) return "No results found.";
    std::string out;
    for (std::size_t i = 0; i < results.size(); ++i) {
        out += "[" + std::to_string(i + 1) + "] " + results[i].source + ": " + results[i].snippet + "\n";
    }
    out.pop_back();
    return out;
}

}  // namespace agentctl::tools
