#pragma once

#include <json.hpp>

#include "aspectsum/domain.hpp"

// nlohmann/json bindings for the domain types; field names mirror the structs.
namespace aspectsum {

void to_json(nlohmann::json& j, const Review& r);
/// Validates the result; throws ValidationError on missing or bad fields.
void from_json(const nlohmann::json& j, Review& r);

void to_json(nlohmann::json& j, const AspectMention& m);
void from_json(const nlohmann::json& j, AspectMention& m);

void to_json(nlohmann::json& j, const ExtractionResult& r);
void from_json(const nlohmann::json& j, ExtractionResult& r);

void to_json(nlohmann::json& j, const RankedAspect& a);

void to_json(nlohmann::json& j, const SummaryRecord& s);
void from_json(const nlohmann::json& j, SummaryRecord& s);

}  // namespace aspectsum
