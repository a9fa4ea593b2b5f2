#pragma once

#include <cstddef>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "aspectsum/dataset_io.hpp"
#include "aspectsum/domain.hpp"

namespace aspectsum {

/// Labels assigned by at least two annotators. nullopt (no majority) when no
/// label reaches two votes, or when NO_ERRORS and an error label both do.
/// Throws ValidationError for fewer than two annotators.
std::optional<LabelSet> majority_vote(std::span<const LabelSet> annotator_labels);

/// Fraction of items whose majority_vote is not empty. Throws ValidationError
/// for an empty input.
double agreement_rate(std::span<const std::vector<LabelSet>> items);

enum class SeverityTier { NoError, Minor, Major };

std::string_view to_string(SeverityTier tier);

/// Any of EXAGGERATION_UNDERSTATEMENT, MAJOR_MISREPRESENTATION, MAJOR_OMISSION
/// makes the product major; otherwise minor labels make it minor. Throws
/// ValidationError for an invalid label set.
SeverityTier classify(const LabelSet& labels);

struct ErrorDistribution {
    /// All products, including those without a majority.
    std::size_t total = 0;
    std::size_t no_error = 0;
    std::size_t minor = 0;
    std::size_t major = 0;
    std::size_t no_majority = 0;
    std::map<ErrorLabel, std::size_t> label_counts;

    /// Whole percent of `total`.
    int percent(SeverityTier tier) const;
};

/// One entry per product; nullopt marks a product without majority agreement,
/// which is counted separately and excluded from the tiers.
ErrorDistribution error_distribution(std::span<const std::optional<LabelSet>> final_labels);

struct FinalAnnotation {
    std::string product_id;
    std::optional<LabelSet> labels;
    std::size_t annotators = 0;
};

/// Groups records by product (sorted by id). One annotator: their labels.
/// Several: majority_vote across them.
std::vector<FinalAnnotation> resolve_final_labels(std::span<const AnnotationRecord> records);

struct AnnotationImport {
    std::vector<AnnotationRecord> records;
    std::vector<RejectedRow> rejects;
};

/// CSV columns product_id, annotator_id, labels (';'-separated), reason.
AnnotationImport read_annotations_csv(std::istream& in);
AnnotationImport import_annotations(const std::filesystem::path& path);
void write_annotations_csv(std::ostream& out, std::span<const AnnotationRecord> records);
void export_annotations(const std::filesystem::path& path, std::span<const AnnotationRecord> records);

std::string format_distribution_tsv(const ErrorDistribution& dist);
nlohmann::json distribution_to_json(const ErrorDistribution& dist);

}  // namespace aspectsum
