#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace aspectsum {

/// Lowercases (ASCII), trims, and collapses runs of whitespace to one space.
/// Idempotent. An empty result means the aspect is unusable.
std::string normalize_aspect(std::string_view raw);

/// Number of Unicode scalar values in a UTF-8 string. Invalid sequences count
/// one per lead byte.
std::size_t utf8_length(std::string_view text);

std::string_view trim(std::string_view s);
std::string to_lower_ascii(std::string_view s);
bool iequals(std::string_view a, std::string_view b);

std::vector<std::string_view> split(std::string_view s, char sep);

/// 64-bit FNV-1a; used to derive per-product seeds.
std::uint64_t fnv1a64(std::string_view s);

}  // namespace aspectsum
