#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace agentctl::tools {

inline constexpr std::size_t kChunkSize = 800;
inline constexpr std::size_t kChunkOverlap = 200;

struct Document {
    std::string id;
    std::filesystem::path source;
    std::string text;
};

struct Chunk {
    std::size_t doc = 0;
    std::size_t offset = 0;
    std::string text;
};

// [begin, end) windows of at most `size` characters advancing by
// size - overlap until the text is covered.
std::vector<std::pair<std::size_t, std::size_t>> chunk_spans(std::size_t length, std::size_t size = kChunkSize,
                                                             std::size_t overlap = kChunkOverlap);

class CorpusIndex {
public:
    void add_document(std::string id, std::filesystem::path source, std::string text);

    const std::vector<Document>& documents() const noexcept { return documents_; }
    const std::vector<Chunk>& chunks() const noexcept { return chunks_; }
    bool empty() const noexcept { return chunks_.empty(); }

    std::size_t doc_freq(const std::string& term) const;
    std::size_t term_freq(std::size_t chunk, const std::string& term) const;
    std::size_t chunk_length(std::size_t chunk) const { return chunk_lengths_.at(chunk); }
    double average_chunk_length() const noexcept;

private:
    std::vector<Document> documents_;
    std::vector<Chunk> chunks_;
    std::vector<std::unordered_map<std::string, std::size_t>> chunk_terms_;
    std::vector<std::size_t> chunk_lengths_;
    std::map<std::string, std::size_t> doc_freq_;
    std::size_t total_length_ = 0;
};

// Text of a .txt/.md file, or the embedded text of a .pdf. IngestError when
// the file cannot be read.
std::string extract_text(const std::filesystem::path& path);

// Literal and hex strings shown by Tj/TJ/'/" operators, with FlateDecode
// streams inflated. Scanned PDFs yield an empty string.
std::string extract_pdf_text(std::string_view bytes);

// Files are ingested as given; directories are walked recursively in sorted
// order, picking up .txt, .md and .pdf files.
CorpusIndex ingest_corpus(const std::vector<std::filesystem::path>& paths);
void ingest_into(CorpusIndex& index, const std::filesystem::path& path);

}  // namespace agentctl::tools
