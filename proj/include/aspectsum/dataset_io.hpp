#pragma once

#include <cstddef>
#include <filesystem>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "aspectsum/domain.hpp"

namespace aspectsum {

/// Column and key names of the reviews table. The defaults follow the
/// released table; override them when a copy uses different names.
struct ReviewsSchema {
    std::string review_id = "review_id";
    std::string product_id = "product_id";
    std::string text = "review_text";
    /// JSON array of {aspect, sentiment} objects. Optional column.
    std::string aspects = "aspects";
    std::string aspect_key = "aspect";
    std::string sentiment_key = "sentiment";
    // Optional metadata columns used by ingestion.
    std::string created_at = "created_at";
    std::string verified_purchaser = "verified_purchaser";
    std::string language = "language";
};

struct RejectedRow {
    std::size_t line = 0;
    std::string reason;
};

struct ReviewRecord {
    Review review;
    std::vector<AspectMention> mentions;

    bool operator==(const ReviewRecord&) const = default;
};

struct ReviewsTable {
    std::vector<ReviewRecord> records;
    std::vector<RejectedRow> rejects;
};

/// CSV with a header row, or newline-delimited JSON objects when the file
/// ends in .jsonl / .ndjson. Throws SchemaError if the file cannot be read or
/// a required column is missing; bad rows go to `rejects`. Duplicate
/// review_ids are rejected after the first.
ReviewsTable load_reviews_table(const std::filesystem::path& path, const ReviewsSchema& schema = {});
ReviewsTable read_reviews_csv(std::istream& in, const ReviewsSchema& schema = {});
ReviewsTable read_reviews_ndjson(std::istream& in, const ReviewsSchema& schema = {});

/// CSV in the default column order: review_id, product_id, review_text,
/// aspects, created_at, verified_purchaser, language.
void write_reviews_table(std::ostream& out, std::span<const ReviewRecord> records);
void write_reviews_table(const std::filesystem::path& path, std::span<const ReviewRecord> records);

struct SummaryRow {
    std::string product_id;
    std::string product_class;
    std::string summary;

    bool operator==(const SummaryRow&) const = default;
};

struct SummariesTable {
    std::vector<SummaryRow> rows;
    std::vector<RejectedRow> rejects;
};

/// Columns product_id, product_class, summary. Later duplicates of a
/// product_id are rejected.
SummariesTable load_summaries_table(const std::filesystem::path& path);
SummariesTable read_summaries_csv(std::istream& in);

}  // namespace aspectsum
