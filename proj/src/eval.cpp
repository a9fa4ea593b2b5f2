#include "aspectsum/eval.hpp"

#include <cmath>
#include <fstream>

#include "aspectsum/csv.hpp"
#include "aspectsum/errors.hpp"
#include "aspectsum/text.hpp"

namespace aspectsum {

std::optional<LabelSet> majority_vote(std::span<const LabelSet> annotator_labels) {
    if (annotator_labels.size() < 2) throw ValidationError("majority vote needs at least two annotators");
    std::map<ErrorLabel, std::size_t> votes;
    for (const auto& set : annotator_labels)
        for (auto l : set) ++votes[l];
    LabelSet agreed;
    for (const auto& [label, n] : votes) {
        if (n >= 2) agreed.insert(label);
    }
    if (agreed.empty() || !is_valid_label_set(agreed)) return std::nullopt;
    return agreed;
}

double agreement_rate(std::span<const std::vector<LabelSet>> items) {
    if (items.empty()) throw ValidationError("agreement rate of an empty set is undefined");
    std::size_t agreed = 0;
    for (const auto& item : items) {
        if (majority_vote(item)) ++agreed;
    }
    return static_cast<double>(agreed) / static_cast<double>(items.size());
}

std::string_view to_string(SeverityTier tier) {
    switch (tier) {
        case SeverityTier::NoError: return "no_error";
        case SeverityTier::Minor: return "minor";
        case SeverityTier::Major: return "major";
    }
    return "no_error";
}

SeverityTier classify(const LabelSet& labels) {
    if (!is_valid_label_set(labels)) throw ValidationError("invalid label set");
    if (labels.count(ErrorLabel::NoErrors)) return SeverityTier::NoError;
    if (labels.count(ErrorLabel::ExaggerationUnderstatement) || labels.count(ErrorLabel::MajorMisrepresentation) ||
        labels.count(ErrorLabel::MajorOmission))
        return SeverityTier::Major;
    return SeverityTier::Minor;
}

int ErrorDistribution::percent(SeverityTier tier) const {
    if (total == 0) return 0;
    const auto n = tier == SeverityTier::NoError ? no_error : tier == SeverityTier::Minor ? minor : major;
    return static_cast<int>(std::lround(100.0 * static_cast<double>(n) / static_cast<double>(total)));
}

ErrorDistribution error_distribution(std::span<const std::optional<LabelSet>> final_labels) {
    ErrorDistribution d;
    d.total = final_labels.size();
    for (const auto& labels : final_labels) {
        if (!labels) {
            ++d.no_majority;
            continue;
        }
        switch (classify(*labels)) {
            case SeverityTier::NoError: ++d.no_error; break;
            case SeverityTier::Minor: ++d.minor; break;
            case SeverityTier::Major: ++d.major; break;
        }
        for (auto l : *labels) ++d.label_counts[l];
    }
    return d;
}

std::vector<FinalAnnotation> resolve_final_labels(std::span<const AnnotationRecord> records) {
    std::map<std::string, std::vector<LabelSet>> by_product;
    for (const auto& r : records) by_product[r.product_id].push_back(r.labels);
    std::vector<FinalAnnotation> out;
    out.reserve(by_product.size());
    for (auto& [product, sets] : by_product) {
        FinalAnnotation f{product, std::nullopt, sets.size()};
        f.labels = sets.size() == 1 ? std::optional<LabelSet>(sets.front()) : majority_vote(sets);
        out.push_back(std::move(f));
    }
    return out;
}

AnnotationImport read_annotations_csv(std::istream& in) {
    CsvReader reader(in);
    CsvRow header;
    if (!reader.next(header)) throw SchemaError("annotation file is empty (no header row)");
    std::map<std::string, std::size_t> idx;
    for (std::size_t i = 0; i < header.size(); ++i) idx.emplace(std::string(trim(header[i])), i);
    auto col = [&](const char* name) {
        auto it = idx.find(name);
        if (it == idx.end()) throw SchemaError(std::string("annotation file is missing column '") + name + "'");
        return it->second;
    };
    const auto c_product = col("product_id");
    const auto c_annotator = col("annotator_id");
    const auto c_labels = col("labels");
    const auto c_reason = col("reason");

    AnnotationImport out;
    CsvRow row;
    while (reader.next(row)) {
        if (row.size() == 1 && trim(row[0]).empty()) continue;
        try {
            if (row.size() != header.size()) throw ValidationError("wrong number of fields");
            AnnotationRecord rec{row[c_product], row[c_annotator], {}, row[c_reason]};
            if (trim(rec.product_id).empty()) throw ValidationError("empty product_id");
            for (auto part : split(row[c_labels], ';')) {
                if (trim(part).empty()) continue;
                auto label = parse_error_label(part);
                if (!label) throw ValidationError("unknown label '" + std::string(trim(part)) + "'");
                rec.labels.insert(*label);
            }
            if (!is_valid_label_set(rec.labels))
                throw ValidationError("label set must be non-empty and NO_ERRORS must stand alone");
            out.records.push_back(std::move(rec));
        } catch (const ValidationError& e) {
            out.rejects.push_back({reader.line(), e.what()});
        }
    }
    return out;
}

AnnotationImport import_annotations(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw SchemaError("cannot read annotation file " + path.string());
    return read_annotations_csv(in);
}

void write_annotations_csv(std::ostream& out, std::span<const AnnotationRecord> records) {
    write_csv_row(out, {"product_id", "annotator_id", "labels", "reason"});
    for (const auto& r : records) {
        std::string labels;
        for (auto l : r.labels) {
            if (!labels.empty()) labels += ';';
            labels += to_string(l);
        }
        write_csv_row(out, {r.product_id, r.annotator_id, labels, r.reason});
    }
}

void export_annotations(const std::filesystem::path& path, std::span<const AnnotationRecord> records) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw StorageError("cannot write " + path.string());
    write_annotations_csv(out, records);
}

std::string format_distribution_tsv(const ErrorDistribution& d) {
    std::string out = "tier\tproducts\tpercent\n";
    for (auto tier : {SeverityTier::NoError, SeverityTier::Minor, SeverityTier::Major}) {
        const auto n = tier == SeverityTier::NoError ? d.no_error : tier == SeverityTier::Minor ? d.minor : d.major;
        out += std::string(to_string(tier)) + "\t" + std::to_string(n) + "\t" + std::to_string(d.percent(tier)) + "\n";
    }
    out += "no_majority\t" + std::to_string(d.no_majority) + "\t-\n";
    out += "total\t" + std::to_string(d.total) + "\t-\n";
    out += "\nlabel\tcount\n";
    for (auto l : kAllErrorLabels) {
        auto it = d.label_counts.find(l);
        out += std::string(to_string(l)) + "\t" + std::to_string(it == d.label_counts.end() ? 0 : it->second) + "\n";
    }
    return out;
}

nlohmann::json distribution_to_json(const ErrorDistribution& d) {
    nlohmann::json labels = nlohmann::json::object();
    for (auto l : kAllErrorLabels) {
        auto it = d.label_counts.find(l);
        labels[std::string(to_string(l))] = it == d.label_counts.end() ? 0 : it->second;
    }
    return {{"total", d.total},
            {"no_majority", d.no_majority},
            {"tiers",
             {{"no_error", {{"products", d.no_error}, {"percent", d.percent(SeverityTier::NoError)}}},
              {"minor", {{"products", d.minor}, {"percent", d.percent(SeverityTier::Minor)}}},
              {"major", {{"products", d.major}, {"percent", d.percent(SeverityTier::Major)}}}}},
            {"labels", labels}};
}

}  // namespace aspectsum
