#include "aspectsum/store.hpp"

#include <fstream>
#include <mutex>

#include <unistd.h>

#include <json.hpp>

#include "aspectsum/errors.hpp"
#include "aspectsum/json_codec.hpp"

namespace aspectsum {

using nlohmann::json;

JournalStore::JournalStore(std::filesystem::path path) : path_(std::move(path)) {
    if (path_.empty()) return;
    replay();
    journal_ = std::fopen(path_.c_str(), "ab");
    if (!journal_) throw StorageError("cannot open journal " + path_.string() + " for appending");
}

JournalStore::~JournalStore() {
    if (journal_) std::fclose(journal_);
}

void JournalStore::replay() {
    std::ifstream in(path_, std::ios::binary);
    if (!in) {
        if (std::filesystem::exists(path_)) throw StorageError("cannot read journal " + path_.string());
        return;
    }
    std::vector<std::string> lines;
    std::string line;
    std::uintmax_t good_bytes = 0;
    bool torn = false;
    while (std::getline(in, line)) {
        if (in.eof()) {
            // No trailing newline: the last append did not complete.
            torn = true;
            break;
        }
        lines.push_back(line);
    }
    std::size_t line_no = 0;
    for (const auto& l : lines) {
        ++line_no;
        const bool last = line_no == lines.size();
        json rec = json::parse(l, nullptr, false);
        try {
            if (rec.is_discarded()) throw ValidationError("not JSON");
            const auto type = rec.at("type").get<std::string>();
            const auto& data = rec.at("data");
            if (type == "review") {
                auto r = data.get<Review>();
                product_reviews_[r.product_id].push_back(r.review_id);
                reviews_.emplace(r.review_id, std::move(r));
            } else if (type == "extraction") {
                auto e = data.get<ExtractionResult>();
                extractions_[e.review_id] = std::move(e);
            } else if (type == "summary") {
                auto s = data.get<SummaryRecord>();
                summaries_[s.product_id] = std::move(s);
            } else {
                throw ValidationError("unknown record type " + type);
            }
        } catch (const std::exception& e) {
            if (last && !torn) {
                torn = true;
                break;
            }
            throw StorageError(path_.string() + ":" + std::to_string(line_no) + ": corrupt journal record: " + e.what());
        }
        good_bytes += l.size() + 1;
    }
    if (torn) {
        std::error_code ec;
        std::filesystem::resize_file(path_, good_bytes, ec);
        if (ec) throw StorageError("cannot truncate torn journal tail: " + ec.message());
    }
}

void JournalStore::append_line(const std::string& line) {
    if (!journal_) return;
    const std::string data = line + "\n";
    if (std::fwrite(data.data(), 1, data.size(), journal_) != data.size() || std::fflush(journal_) != 0 ||
        ::fsync(::fileno(journal_)) != 0) {
        throw StorageError("journal write failed for " + path_.string());
    }
}

bool JournalStore::put_review(const Review& review) {
    validate(review);
    std::unique_lock lock(mutex_);
    if (reviews_.count(review.review_id)) return false;
    append_line(json{{"type", "review"}, {"data", review}}.dump());
    product_reviews_[review.product_id].push_back(review.review_id);
    reviews_.emplace(review.review_id, review);
    return true;
}

std::vector<Review> JournalStore::get_reviews(const std::string& product_id) const {
    std::shared_lock lock(mutex_);
    std::vector<Review> out;
    auto it = product_reviews_.find(product_id);
    if (it == product_reviews_.end()) return out;
    out.reserve(it->second.size());
    for (const auto& id : it->second) out.push_back(reviews_.at(id));
    return out;
}

std::optional<Review> JournalStore::get_review(const std::string& review_id) const {
    std::shared_lock lock(mutex_);
    auto it = reviews_.find(review_id);
    if (it == reviews_.end()) return std::nullopt;
    return it->second;
}

std::size_t JournalStore::review_count(const std::string& product_id) const {
    std::shared_lock lock(mutex_);
    auto it = product_reviews_.find(product_id);
    return it == product_reviews_.end() ? 0 : it->second.size();
}

void JournalStore::put_extraction(const ExtractionResult& result) {
    std::unique_lock lock(mutex_);
    append_line(json{{"type", "extraction"}, {"data", result}}.dump());
    extractions_[result.review_id] = result;
}

std::optional<ExtractionResult> JournalStore::get_extraction(const std::string& review_id) const {
    std::shared_lock lock(mutex_);
    auto it = extractions_.find(review_id);
    if (it == extractions_.end()) return std::nullopt;
    return it->second;
}

void JournalStore::put_summary(const SummaryRecord& summary) {
    std::unique_lock lock(mutex_);
    append_line(json{{"type", "summary"}, {"data", summary}}.dump());
    summaries_[summary.product_id] = summary;
}

std::optional<SummaryRecord> JournalStore::get_summary(const std::string& product_id) const {
    std::shared_lock lock(mutex_);
    auto it = summaries_.find(product_id);
    if (it == summaries_.end()) return std::nullopt;
    return it->second;
}

RefreshState JournalStore::get_refresh_state(const std::string& product_id) const {
    std::shared_lock lock(mutex_);
    RefreshState state;
    state.product_id = product_id;
    auto it = product_reviews_.find(product_id);
    state.current_review_count = it == product_reviews_.end() ? 0 : it->second.size();
    auto s = summaries_.find(product_id);
    if (s != summaries_.end()) state.count_at_last_summary = s->second.review_count_at_generation;
    return state;
}

std::vector<std::string> JournalStore::product_ids() const {
    std::shared_lock lock(mutex_);
    std::vector<std::string> out;
    out.reserve(product_reviews_.size());
    for (const auto& [id, list] : product_reviews_) out.push_back(id);
    return out;
}

}  // namespace aspectsum
