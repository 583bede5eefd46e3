#include "agentctl/tools/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include <zlib.h>

#include "agentctl/error.hpp"
#include "agentctl/tools/text.hpp"

namespace agentctl::tools {

namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IngestError, "cannot read " + path.string());
    std::ostringstream os;
    os << in.rdbuf();
    if (in.bad()) throw Error(ErrorCode::IngestError, "read failed for " + path.string());
    return os.str();
}

bool inflate_stream(std::string_view in, std::string& out) {
    z_stream zs{};
    if (inflateInit(&zs) != Z_OK) return false;
    zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(in.data()));
    zs.avail_in = static_cast<uInt>(in.size());
    char buf[16384];
    int rc = Z_OK;
    do {
        zs.next_out = reinterpret_cast<Bytef*>(buf);
        zs.avail_out = sizeof buf;
        rc = inflate(&zs, Z_NO_FLUSH);
        if (rc != Z_OK && rc != Z_STREAM_END) break;
        out.append(buf, sizeof buf - zs.avail_out);
    } while (rc != Z_STREAM_END && zs.avail_in > 0);
    inflateEnd(&zs);
    return rc == Z_STREAM_END || rc == Z_OK;
}

std::string parse_literal(std::string_view s, std::size_t& i) {
    // s[i] == '('
    std::string out;
    int depth = 1;
    ++i;
    while (i < s.size() && depth > 0) {
        const char c = s[i++];
        if (c == '\\' && i < s.size()) {
            const char e = s[i++];
            switch (e) {
                case 'n': out += '\n'; break;
                case 'r': out += '\r'; break;
                case 't': out += '\t'; break;
                case 'b': out += '\b'; break;
                case 'f': out += '\f'; break;
                case '\r':
                case '\n': break;
                default:
                    if (e >= '0' && e <= '7') {
                        int v = e - '0';
                        for (int k = 0; k < 2 && i < s.size() && s[i] >= '0' && s[i] <= '7'; ++k) v = v * 8 + (s[i++] - '0');
                        out += static_cast<char>(v);
                    } else {
                        out += e;
                    }
            }
        } else if (c == '(') {
            ++depth;
            out += c;
        } else if (c == ')') {
            if (--depth > 0) out += c;
        } else {
            out += c;
        }
    }
    return out;
}

std::string parse_hex(std::string_view s, std::size_t& i) {
    // s[i] == '<', not a dictionary
    std::string digits;
    ++i;
    while (i < s.size() && s[i] != '>') {
        if (std::isxdigit(static_cast<unsigned char>(s[i]))) digits += s[i];
        ++i;
    }
    ++i;
    if (digits.size() % 2) digits += '0';
    std::string out;
    for (std::size_t k = 0; k < digits.size(); k += 2) out += static_cast<char>(std::stoi(digits.substr(k, 2), nullptr, 16));
    return out;
}

// Walks a content stream collecting strings shown by text operators.
void scan_content(std::string_view s, std::string& text) {
    std::vector<std::string> operands;
    std::size_t i = 0;
    auto newline = [&] {
        if (!text.empty() && text.back() != '\n') text += '\n';
    };
    while (i < s.size()) {
        const char c = s[i];
        if (c == '%') {
            while (i < s.size() && s[i] != '\n' && s[i] != '\r') ++i;
        } else if (c == '(') {
            operands.push_back(parse_literal(s, i));
        } else if (c == '<' && i + 1 < s.size() && s[i + 1] != '<') {
            operands.push_back(parse_hex(s, i));
        } else if (c == '[' || c == ']') {
            ++i;
        } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '\'' || c == '"' || c == '*') {
            std::size_t j = i;
            while (j < s.size() && (std::isalpha(static_cast<unsigned char>(s[j])) || s[j] == '*' || s[j] == '\'' ||
                                    s[j] == '"')) {
                ++j;
            }
            const std::string_view op = s.substr(i, j - i);
            i = j;
            if (op == "Tj" || op == "TJ") {
                for (auto& o : operands) text += o;
            } else if (op == "'" || op == "\"") {
                newline();
                for (auto& o : operands) text += o;
            } else if (op == "T*" || op == "Td" || op == "TD" || op == "ET") {
                newline();
            }
            operands.clear();
        } else {
            ++i;
        }
    }
}

}  // namespace

std::vector<std::pair<std::size_t, std::size_t>> chunk_spans(std::size_t length, std::size_t size, std::size_t overlap) {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    if (length == 0 || size == 0) return out;
    const std::size_t stride = size > overlap ? size - overlap : size;
    for (std::size_t begin = 0;; begin += stride) {
        const std::size_t end = std::min(length, begin + size);
        out.emplace_back(begin, end);
        if (end == length) break;
    }
    return out;
}

void CorpusIndex::add_document(std::string id, fs::path source, std::string text) {
    const std::size_t doc = documents_.size();
    for (const auto& [begin, end] : chunk_spans(text.size())) {
        Chunk chunk{doc, begin, text.substr(begin, end - begin)};
        std::unordered_map<std::string, std::size_t> tf;
        const auto toks = tokenize(chunk.text);
        for (const auto& t : toks) ++tf[t];
        for (const auto& [t, n] : tf) ++doc_freq_[t];
        chunk_lengths_.push_back(toks.size());
        total_length_ += toks.size();
        chunk_terms_.push_back(std::move(tf));
        chunks_.push_back(std::move(chunk));
    }
    documents_.push_back({std::move(id), std::move(source), std::move(text)});
}

std::size_t CorpusIndex::doc_freq(const std::string& term) const {
    auto it = doc_freq_.find(term);
    return it == doc_freq_.end() ? 0 : it->second;
}

std::size_t CorpusIndex::term_freq(std::size_t chunk, const std::string& term) const {
    const auto& tf = chunk_terms_.at(chunk);
    auto it = tf.find(term);
    return it == tf.end() ? 0 : it->second;
}

double CorpusIndex::average_chunk_length() const noexcept {
    return chunks_.empty() ? 0.0 : static_cast<double>(total_length_) / static_cast<double>(chunks_.size());
}

std::string extract_pdf_text(std::string_view bytes) {
    std::string text;
    std::size_t pos = 0;
    while ((pos = bytes.find("stream", pos)) != std::string_view::npos) {
        if (pos >= 3 && bytes.substr(pos - 3, 3) == "end") {
            pos += 6;
            continue;
        }
        const std::size_t dict_start = bytes.rfind("<<", pos);
        const std::string_view dict =
            dict_start == std::string_view::npos ? std::string_view{} : bytes.substr(dict_start, pos - dict_start);
        std::size_t data = pos + 6;
        if (data < bytes.size() && bytes[data] == '\r') ++data;
        if (data < bytes.size() && bytes[data] == '\n') ++data;
        const std::size_t end = bytes.find("endstream", data);
        if (end == std::string_view::npos) break;
        std::string_view raw = bytes.substr(data, end - data);
        pos = end + 9;
        if (dict.find("/Subtype") != std::string_view::npos && dict.find("/Image") != std::string_view::npos) continue;
        std::string content;
        if (dict.find("/FlateDecode") != std::string_view::npos) {
            if (!inflate_stream(raw, content)) continue;
        } else {
            content.assign(raw);
        }
        if (content.find("BT") == std::string::npos) continue;
        scan_content(content, text);
    }
    while (!text.empty() && text.back() == '\n') text.pop_back();
    return text;
}

std::string extract_text(const fs::path& path) {
    std::string bytes = read_file(path);
    std::string ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    if (ext == ".pdf") {
        if (!bytes.starts_with("%PDF-")) throw Error(ErrorCode::IngestError, path.string() + " is not a PDF file");
        return extract_pdf_text(bytes);
    }
    return bytes;
}

void ingest_into(CorpusIndex& index, const fs::path& path) {
    std::error_code ec;
    if (fs::is_directory(path, ec)) {
        std::vector<fs::path> files;
        for (const auto& entry : fs::recursive_directory_iterator(path, ec)) {
            if (!entry.is_regular_file()) continue;
            std::string ext = entry.path().extension().string();
            std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
            if (ext == ".txt" || ext == ".md" || ext == ".pdf") files.push_back(entry.path());
        }
        if (ec) throw Error(ErrorCode::IngestError, "cannot list " + path.string() + ": " + ec.message());
        std::sort(files.begin(), files.end());
        for (const auto& f : files) index.add_document(f.filename().string(), f, extract_text(f));
        return;
    }
    if (!fs::exists(path, ec)) throw Error(ErrorCode::IngestError, "no such file " + path.string());
    index.add_document(path.filename().string(), path, extract_text(path));
}

CorpusIndex ingest_corpus(const std::vector<fs::path>& paths) {
    CorpusIndex index;
    for (const auto& p : paths) ingest_into(index, p);
    return index;
}

}  // namespace agentctl::tools
