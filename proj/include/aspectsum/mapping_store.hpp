#pragma once

#include <cstdint>
#include <filesystem>
#include <mutex>

#include "aspectsum/consolidation.hpp"
#include "aspectsum/domain.hpp"

namespace aspectsum {

/// Append-only log of `raw<TAB>canonical<TAB>version` lines. The last record
/// for a raw aspect wins; load() rewrites the file with one line per entry.
class MappingStore {
public:
    explicit MappingStore(std::filesystem::path path);

    /// Missing file -> empty map. Chains in the log are collapsed on load.
    /// Throws StorageError for unreadable files or malformed lines.
    ConsolidationMap load();

    void append(const MappingChanges& changes, std::uint64_t version);
    /// Atomically replaces the file with the map's current entries.
    void compact(const ConsolidationMap& map);

    /// Listener suitable for AspectVocabulary::set_listener.
    AspectVocabulary::Listener listener();

    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
    std::mutex mutex_;
};

}  // namespace aspectsum
