#include "agentctl/tools/retriever.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "agentctl/error.hpp"
#include "agentctl/tools/text.hpp"

namespace agentctl::tools {

double bm25_score(const CorpusIndex& index, std::size_t chunk, const std::vector<std::string>& query_terms,
                  const Bm25Params& params) {
    const double n = static_cast<double>(index.chunks().size());
    const double avg = std::max(index.average_chunk_length(), 1e-12);
    const double len = static_cast<double>(index.chunk_length(chunk));
    double score = 0.0;
    for (const auto& term : query_terms) {
        const double tf = static_cast<double>(index.term_freq(chunk, term));
        if (tf == 0.0) continue;
        const double df = static_cast<double>(index.doc_freq(term));
        const double idf = std::log(1.0 + (n - df + 0.5) / (df + 0.5));
        score += idf * tf * (params.k1 + 1.0) / (tf + params.k1 * (1.0 - params.b + params.b * len / avg));
    }
    return score;
}

RetrievalResult retriever_tool(std::string_view query, const CorpusIndex& index, std::size_t k,
                               const Bm25Params& params) {
    if (index.empty()) throw Error(ErrorCode::NoCorpus, "no documents have been ingested");
    const auto terms = key_terms(query);
    std::vector<RetrievalHit> all(index.chunks().size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = {i, bm25_score(index, i, terms, params)};
    std::stable_sort(all.begin(), all.end(), [](const RetrievalHit& a, const RetrievalHit& b) { return a.score > b.score; });

    RetrievalResult out;
    out.low_confidence = all.front().score <= 0.0;
    const std::size_t take = std::min(k, all.size());
    for (std::size_t i = 0; i < take; ++i) {
        if (!out.low_confidence && all[i].score <= 0.0) break;
        out.hits.push_back(all[i]);
    }
    return out;
}

std::string format_retrieval(const RetrievalResult& result, const CorpusIndex& index) {
    std::string out = result.low_confidence ? "No passage matched the query terms; closest passages (low confidence):\n"
                                            : "Top passages:\n";
    for (std::size_t i = 0; i < result.hits.size(); ++i) {
        const Chunk& c = index.chunks().at(result.hits[i].chunk);
        char head[160];
        std::snprintf(head, sizeof head, "[%zu] %s, offset %zu, score %.2f\n", i + 1,
                      index.documents().at(c.doc).id.c_str(), c.offset, result.hits[i].score);
        out += head;
        out += c.text;
        if (!out.ends_with('\n')) out += '\n';
    }
    return out;
}

}  // namespace agentctl::tools
