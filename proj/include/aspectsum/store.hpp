#pragma once

#include <cstdio>
#include <filesystem>
#include <map>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "aspectsum/domain.hpp"

namespace aspectsum {

/// Keyed persistence for the pipeline. Writes are durable when the call
/// returns; I/O failures throw StorageError.
class Store {
public:
    virtual ~Store() = default;

    /// False (and no write) if the review_id already exists.
    virtual bool put_review(const Review& review) = 0;
    /// In insertion order.
    virtual std::vector<Review> get_reviews(const std::string& product_id) const = 0;
    virtual std::optional<Review> get_review(const std::string& review_id) const = 0;
    virtual std::size_t review_count(const std::string& product_id) const = 0;

    virtual void put_extraction(const ExtractionResult& result) = 0;
    virtual std::optional<ExtractionResult> get_extraction(const std::string& review_id) const = 0;

    /// Replaces the product's summary; the summary carries the refresh baseline.
    virtual void put_summary(const SummaryRecord& summary) = 0;
    virtual std::optional<SummaryRecord> get_summary(const std::string& product_id) const = 0;

    virtual RefreshState get_refresh_state(const std::string& product_id) const = 0;
    /// Sorted.
    virtual std::vector<std::string> product_ids() const = 0;
};

/// Single-file store: an append-only journal of JSON lines replayed on open.
/// A torn final line (crash mid-append) is dropped; corruption elsewhere is an
/// error. An empty path keeps everything in memory.
class JournalStore final : public Store {
public:
    explicit JournalStore(std::filesystem::path path = {});
    ~JournalStore() override;

    JournalStore(const JournalStore&) = delete;
    JournalStore& operator=(const JournalStore&) = delete;

    bool put_review(const Review& review) override;
    std::vector<Review> get_reviews(const std::string& product_id) const override;
    std::optional<Review> get_review(const std::string& review_id) const override;
    std::size_t review_count(const std::string& product_id) const override;
    void put_extraction(const ExtractionResult& result) override;
    std::optional<ExtractionResult> get_extraction(const std::string& review_id) const override;
    void put_summary(const SummaryRecord& summary) override;
    std::optional<SummaryRecord> get_summary(const std::string& product_id) const override;
    RefreshState get_refresh_state(const std::string& product_id) const override;
    std::vector<std::string> product_ids() const override;

private:
    void replay();
    void append_line(const std::string& line);

    std::filesystem::path path_;
    std::FILE* journal_ = nullptr;
    mutable std::shared_mutex mutex_;
    std::map<std::string, Review> reviews_;
    std::map<std::string, std::vector<std::string>> product_reviews_;
    std::map<std::string, ExtractionResult> extractions_;
    std::map<std::string, SummaryRecord> summaries_;
};

}  // namespace aspectsum
