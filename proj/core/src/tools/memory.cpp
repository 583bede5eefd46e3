#include "agentctl/tools/memory.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "agentctl/error.hpp"
#include "agentctl/tools/text.hpp"

namespace agentctl::tools {

namespace fs = std::filesystem;

MemoryRecord make_record(std::string query, std::string transcript, std::string answer, std::int64_t stored_at) {
    if (transcript.find_first_not_of(" \t\r\n") == std::string::npos) {
        throw Error(ErrorCode::ValidationError, "memory record needs a nonempty transcript");
    }
    MemoryRecord r{std::move(query), std::move(transcript), std::move(answer), stored_at, {}};
    r.key_terms = key_terms(r.query + "\n" + r.answer + "\n" + r.transcript);
    return r;
}

nlohmann::json to_json(const MemoryRecord& record) {
    return {{"query", record.query},
            {"transcript", record.transcript},
            {"answer", record.answer},
            {"stored_at", record.stored_at},
            {"key_terms", record.key_terms}};
}

MemoryRecord record_from_json(const nlohmann::json& j) {
    MemoryRecord r;
    r.query = j.at("query").get<std::string>();
    r.transcript = j.at("transcript").get<std::string>();
    r.answer = j.value("answer", std::string{});
    r.stored_at = j.value("stored_at", std::int64_t{0});
    if (j.contains("key_terms")) {
        r.key_terms = j["key_terms"].get<std::vector<std::string>>();
    } else {
        r.key_terms = key_terms(r.query + "\n" + r.answer + "\n" + r.transcript);
    }
    return r;
}

void InMemoryStore::append(MemoryRecord record) {
    std::lock_guard lock(mutex_);
    records_.push_back(std::move(record));
}

std::vector<MemoryRecord> InMemoryStore::records() const {
    std::lock_guard lock(mutex_);
    return records_;
}

std::size_t InMemoryStore::size() const {
    std::lock_guard lock(mutex_);
    return records_.size();
}

FileMemoryStore::FileMemoryStore(fs::path path) : path_(std::move(path)) {
    std::error_code ec;
    if (!fs::exists(path_, ec)) return;
    std::ifstream in(path_, std::ios::binary);
    if (!in) throw Error(ErrorCode::StoreError, "cannot open memory log " + path_.string());
    std::string header;
    std::size_t index = 0;
    while (std::getline(in, header)) {
        if (header.empty()) continue;
        std::size_t length = 0;
        try {
            std::size_t used = 0;
            length = std::stoull(header, &used);
            if (used != header.size()) throw std::invalid_argument("length");
        } catch (const std::exception&) {
            throw Error(ErrorCode::StoreError, "corrupt memory log " + path_.string() + " at record " + std::to_string(index));
        }
        std::string body(length, '\0');
        in.read(body.data(), static_cast<std::streamsize>(length));
        if (static_cast<std::size_t>(in.gcount()) != length) {
            throw Error(ErrorCode::StoreError, "truncated memory log " + path_.string() + " at record " + std::to_string(index));
        }
        in.ignore(1);
        try {
            records_.push_back(record_from_json(nlohmann::json::parse(body)));
        } catch (const nlohmann::json::exception& ex) {
            throw Error(ErrorCode::StoreError, "corrupt memory record " + std::to_string(index) + ": " + ex.what());
        }
        ++index;
    }
}

void FileMemoryStore::append(MemoryRecord record) {
    std::lock_guard lock(mutex_);
    const std::string body = to_json(record).dump();
    std::error_code ec;
    if (path_.has_parent_path()) fs::create_directories(path_.parent_path(), ec);
    std::ofstream out(path_, std::ios::binary | std::ios::app);
    if (!out) throw Error(ErrorCode::StoreError, "cannot write memory log " + path_.string());
    out << body.size() << '\n' << body << '\n';
    out.flush();
    if (!out) throw Error(ErrorCode::StoreError, "write failed for memory log " + path_.string());
    records_.push_back(std::move(record));
}

std::vector<MemoryRecord> FileMemoryStore::records() const {
    std::lock_guard lock(mutex_);
    return records_;
}

std::size_t FileMemoryStore::size() const {
    std::lock_guard lock(mutex_);
    return records_.size();
}

double recall_similarity(std::string_view query, const MemoryRecord& record) {
    const auto q = key_terms(query);
    if (q.empty()) return 0.0;
    std::size_t found = 0;
    for (const auto& t : q) found += std::binary_search(record.key_terms.begin(), record.key_terms.end(), t) ? 1 : 0;
    return static_cast<double>(found) / static_cast<double>(q.size());
}

void storage_memory_tool(MemoryStore& store, MemoryRecord record) { store.append(std::move(record)); }

std::optional<RecallHit> recall_memory_tool(std::string_view query, const MemoryStore& store, double threshold) {
    const auto records = store.records();
    std::optional<RecallHit> best;
    for (std::size_t i = 0; i < records.size(); ++i) {
        const double s = recall_similarity(query, records[i]);
        if (!best || s >= best->similarity) best = RecallHit{records[i], s, i};
    }
    if (!best || best->similarity < threshold) return std::nullopt;
    return best;
}

}  // namespace agentctl::tools
