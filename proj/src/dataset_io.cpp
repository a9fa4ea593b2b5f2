#include "aspectsum/dataset_io.hpp"

#include <fstream>
#include <map>
#include <optional>
#include <set>

#include <json.hpp>

#include "aspectsum/csv.hpp"
#include "aspectsum/errors.hpp"
#include "aspectsum/text.hpp"

namespace aspectsum {

using nlohmann::json;

namespace {

std::vector<AspectMention> parse_aspects(const json& arr, const ReviewsSchema& schema) {
    if (!arr.is_array()) throw ValidationError("aspects field is not a JSON array");
    std::vector<AspectMention> out;
    for (const auto& item : arr) {
        if (!item.is_object()) throw ValidationError("aspect entry is not an object");
        auto a = item.find(schema.aspect_key);
        auto s = item.find(schema.sentiment_key);
        if (a == item.end() || s == item.end() || !a->is_string() || !s->is_string())
            throw ValidationError("aspect entry lacks '" + schema.aspect_key + "' or '" + schema.sentiment_key + "'");
        auto sentiment = parse_sentiment_lenient(s->get<std::string>());
        if (!sentiment) throw ValidationError("unknown sentiment '" + s->get<std::string>() + "'");
        auto mention = AspectMention::make(a->get<std::string>(), *sentiment);
        if (!mention) throw ValidationError("empty aspect name");
        out.push_back(std::move(*mention));
    }
    return out;
}

std::vector<AspectMention> parse_aspects_text(std::string_view text, const ReviewsSchema& schema) {
    if (trim(text).empty()) return {};
    json doc = json::parse(text.begin(), text.end(), nullptr, false);
    if (doc.is_discarded()) throw ValidationError("aspects field is not valid JSON");
    return parse_aspects(doc, schema);
}

std::optional<bool> parse_optional_bool(std::string_view v) {
    v = trim(v);
    if (v.empty()) return std::nullopt;
    if (iequals(v, "true") || v == "1") return true;
    if (iequals(v, "false") || v == "0") return false;
    throw ValidationError("verified_purchaser is not a boolean: " + std::string(v));
}

Timestamp parse_created(std::string_view v) {
    if (trim(v).empty()) return Timestamp{};
    auto t = parse_timestamp(v);
    if (!t) throw ValidationError("created_at is not a timestamp: " + std::string(v));
    return *t;
}

json aspects_json(const std::vector<AspectMention>& mentions) {
    json arr = json::array();
    for (const auto& m : mentions) arr.push_back({{"aspect", m.aspect}, {"sentiment", std::string(to_string(m.sentiment))}});
    return arr;
}

void accept(ReviewsTable& table, std::set<std::string>& seen, ReviewRecord record) {
    validate(record.review);
    if (!seen.insert(record.review.review_id).second)
        throw ValidationError("duplicate review_id " + record.review.review_id);
    table.records.push_back(std::move(record));
}

std::map<std::string, std::size_t> header_index(const CsvRow& header) {
    std::map<std::string, std::size_t> idx;
    for (std::size_t i = 0; i < header.size(); ++i) {
        std::string name(trim(header[i]));
        if (i == 0 && name.rfind("\xEF\xBB\xBF", 0) == 0) name.erase(0, 3);
        idx.emplace(std::move(name), i);
    }
    return idx;
}

}  // namespace

ReviewsTable read_reviews_csv(std::istream& in, const ReviewsSchema& schema) {
    CsvReader reader(in);
    CsvRow header;
    if (!reader.next(header)) throw SchemaError("reviews table is empty (no header row)");
    const auto idx = header_index(header);
    auto required = [&](const std::string& name) {
        auto it = idx.find(name);
        if (it == idx.end()) throw SchemaError("reviews table is missing column '" + name + "'");
        return it->second;
    };
    auto optional_col = [&](const std::string& name) -> std::optional<std::size_t> {
        auto it = idx.find(name);
        if (it == idx.end()) return std::nullopt;
        return it->second;
    };
    const auto c_id = required(schema.review_id);
    const auto c_product = required(schema.product_id);
    const auto c_text = required(schema.text);
    const auto c_aspects = optional_col(schema.aspects);
    const auto c_created = optional_col(schema.created_at);
    const auto c_verified = optional_col(schema.verified_purchaser);
    const auto c_language = optional_col(schema.language);

    ReviewsTable table;
    std::set<std::string> seen;
    CsvRow row;
    while (reader.next(row)) {
        const auto line = reader.line();
        if (row.size() == 1 && trim(row[0]).empty()) continue;
        try {
            if (row.size() != header.size())
                throw ValidationError("expected " + std::to_string(header.size()) + " fields, found " +
                                      std::to_string(row.size()));
            ReviewRecord rec;
            rec.review.review_id = row[c_id];
            rec.review.product_id = row[c_product];
            rec.review.text = row[c_text];
            if (c_aspects) rec.mentions = parse_aspects_text(row[*c_aspects], schema);
            if (c_created) rec.review.created_at = parse_created(row[*c_created]);
            if (c_verified) rec.review.verified_purchaser = parse_optional_bool(row[*c_verified]);
            if (c_language && !trim(row[*c_language]).empty()) rec.review.language = std::string(trim(row[*c_language]));
            accept(table, seen, std::move(rec));
        } catch (const ValidationError& e) {
            table.rejects.push_back({line, e.what()});
        }
    }
    return table;
}

ReviewsTable read_reviews_ndjson(std::istream& in, const ReviewsSchema& schema) {
    ReviewsTable table;
    std::set<std::string> seen;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        try {
            json doc = json::parse(line, nullptr, false);
            if (doc.is_discarded() || !doc.is_object()) throw ValidationError("line is not a JSON object");
            auto str = [&](const std::string& key, bool required) -> std::string {
                auto it = doc.find(key);
                if (it == doc.end() || it->is_null()) {
                    if (required) throw ValidationError("missing field '" + key + "'");
                    return {};
                }
                if (it->is_string()) return it->get<std::string>();
                if (it->is_number() || it->is_boolean()) return it->dump();
                throw ValidationError("field '" + key + "' has the wrong type");
            };
            ReviewRecord rec;
            rec.review.review_id = str(schema.review_id, true);
            rec.review.product_id = str(schema.product_id, true);
            rec.review.text = str(schema.text, true);
            if (auto it = doc.find(schema.aspects); it != doc.end() && !it->is_null()) {
                rec.mentions = it->is_string() ? parse_aspects_text(it->get<std::string>(), schema)
                                               : parse_aspects(*it, schema);
            }
            rec.review.created_at = parse_created(str(schema.created_at, false));
            rec.review.verified_purchaser = parse_optional_bool(str(schema.verified_purchaser, false));
            if (auto lang = str(schema.language, false); !lang.empty()) rec.review.language = lang;
            accept(table, seen, std::move(rec));
        } catch (const ValidationError& e) {
            table.rejects.push_back({line_no, e.what()});
        }
    }
    return table;
}

ReviewsTable load_reviews_table(const std::filesystem::path& path, const ReviewsSchema& schema) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw SchemaError("cannot read reviews table " + path.string());
    const auto ext = to_lower_ascii(path.extension().string());
    if (ext == ".jsonl" || ext == ".ndjson") return read_reviews_ndjson(in, schema);
    return read_reviews_csv(in, schema);
}

void write_reviews_table(std::ostream& out, std::span<const ReviewRecord> records) {
    write_csv_row(out, {"review_id", "product_id", "review_text", "aspects", "created_at", "verified_purchaser",
                        "language"});
    for (const auto& r : records) {
        write_csv_row(out, {r.review.review_id, r.review.product_id, r.review.text, aspects_json(r.mentions).dump(),
                            format_timestamp(r.review.created_at),
                            r.review.verified_purchaser ? (*r.review.verified_purchaser ? "true" : "false") : "",
                            r.review.language.value_or("")});
    }
}

void write_reviews_table(const std::filesystem::path& path, std::span<const ReviewRecord> records) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw StorageError("cannot write " + path.string());
    write_reviews_table(out, records);
    if (!out) throw StorageError("write failed for " + path.string());
}

SummariesTable read_summaries_csv(std::istream& in) {
    CsvReader reader(in);
    CsvRow header;
    if (!reader.next(header)) throw SchemaError("summaries table is empty (no header row)");
    const auto idx = header_index(header);
    auto required = [&](const char* name) {
        auto it = idx.find(name);
        if (it == idx.end()) throw SchemaError(std::string("summaries table is missing column '") + name + "'");
        return it->second;
    };
    const auto c_product = required("product_id");
    const auto c_class = required("product_class");
    const auto c_summary = required("summary");

    SummariesTable table;
    std::set<std::string> seen;
    CsvRow row;
    while (reader.next(row)) {
        if (row.size() == 1 && trim(row[0]).empty()) continue;
        if (row.size() != header.size()) {
            table.rejects.push_back({reader.line(), "expected " + std::to_string(header.size()) + " fields"});
            continue;
        }
        SummaryRow r{row[c_product], row[c_class], row[c_summary]};
        if (trim(r.product_id).empty()) {
            table.rejects.push_back({reader.line(), "empty product_id"});
        } else if (!seen.insert(r.product_id).second) {
            table.rejects.push_back({reader.line(), "duplicate product_id " + r.product_id});
        } else {
            table.rows.push_back(std::move(r));
        }
    }
    return table;
}

SummariesTable load_summaries_table(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw SchemaError("cannot read summaries table " + path.string());
    return read_summaries_csv(in);
}

}  // namespace aspectsum
