#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "agentctl/tools/corpus.hpp"

namespace agentctl::tools {

struct Bm25Params {
    double k1 = 1.2;
    double b = 0.75;
};

struct RetrievalHit {
    std::size_t chunk = 0;
    double score = 0.0;
};

struct RetrievalResult {
    std::vector<RetrievalHit> hits;
    // No query term matched; hits are the first chunks in corpus order.
    bool low_confidence = false;
};

double bm25_score(const CorpusIndex& index, std::size_t chunk, const std::vector<std::string>& query_terms,
                  const Bm25Params& params = {});

// Top-k chunks by BM25, ties broken by corpus order. NoCorpus on an empty
// index.
RetrievalResult retriever_tool(std::string_view query, const CorpusIndex& index, std::size_t k = 3,
                               const Bm25Params& params = {});

std::string format_retrieval(const RetrievalResult& result, const CorpusIndex& index);

}  // namespace agentctl::tools
