#pragma once

#include <cstdint>
#include <filesystem>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace agentctl::tools {

inline constexpr double kDefaultRecallThreshold = 0.6;

struct MemoryRecord {
    std::string query;
    std::string transcript;
    std::string answer;
    std::int64_t stored_at = 0;
    // key_terms(query + answer + transcript)
    std::vector<std::string> key_terms;
};

// ValidationError when the transcript is empty.
MemoryRecord make_record(std::string query, std::string transcript, std::string answer, std::int64_t stored_at);

nlohmann::json to_json(const MemoryRecord& record);
MemoryRecord record_from_json(const nlohmann::json& j);

class MemoryStore {
public:
    virtual ~MemoryStore() = default;
    virtual void append(MemoryRecord record) = 0;
    virtual std::vector<MemoryRecord> records() const = 0;
    virtual std::size_t size() const = 0;
};

class InMemoryStore : public MemoryStore {
public:
    void append(MemoryRecord record) override;
    std::vector<MemoryRecord> records() const override;
    std::size_t size() const override;

private:
    mutable std::mutex mutex_;
    std::vector<MemoryRecord> records_;
};

// Append-only log: each record is "<byte length>\n<json>\n". StoreError on
// I/O failure or a corrupt log.
class FileMemoryStore : public MemoryStore {
public:
    explicit FileMemoryStore(std::filesystem::path path);

    void append(MemoryRecord record) override;
    std::vector<MemoryRecord> records() const override;
    std::size_t size() const override;

    const std::filesystem::path& path() const noexcept { return path_; }

private:
    std::filesystem::path path_;
    mutable std::mutex mutex_;
    std::vector<MemoryRecord> records_;
};

struct RecallHit {
    MemoryRecord record;
    double similarity = 0.0;
    std::size_t index = 0;
};

// Fraction of the query's key terms present in the record's key terms.
double recall_similarity(std::string_view query, const MemoryRecord& record);

void storage_memory_tool(MemoryStore& store, MemoryRecord record);

// Best record (latest wins ties) when its similarity reaches the threshold.
std::optional<RecallHit> recall_memory_tool(std::string_view query, const MemoryStore& store,
                                            double threshold = kDefaultRecallThreshold);

}  // namespace agentctl::tools
