#include "aspectsum/mapping_store.hpp"

#include <charconv>
#include <fstream>
#include <string>

#include "aspectsum/errors.hpp"
#include "aspectsum/text.hpp"

namespace aspectsum {

MappingStore::MappingStore(std::filesystem::path path) : path_(std::move(path)) {}

ConsolidationMap MappingStore::load() {
    ConsolidationMap map;
    {
        std::lock_guard lock(mutex_);
        std::ifstream in(path_);
        if (!in) {
            if (std::filesystem::exists(path_)) throw StorageError("cannot read mapping store " + path_.string());
            return map;
        }
        std::string line;
        std::size_t line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.empty()) continue;
            auto cols = split(line, '\t');
            std::uint64_t version = 0;
            if (cols.size() != 3 ||
                std::from_chars(cols[2].data(), cols[2].data() + cols[2].size(), version).ec != std::errc{}) {
                throw StorageError(path_.string() + ":" + std::to_string(line_no) + ": malformed mapping record");
            }
            auto raw = normalize_aspect(cols[0]);
            auto canonical = normalize_aspect(cols[1]);
            if (raw.empty() || canonical.empty())
                throw StorageError(path_.string() + ":" + std::to_string(line_no) + ": empty aspect");
            map.entries[raw] = canonical;
            map.version = std::max(map.version, version);
        }
    }
    restore_fixed_points(map);
    compact(map);
    return map;
}

void MappingStore::append(const MappingChanges& changes, std::uint64_t version) {
    if (changes.empty()) return;
    std::lock_guard lock(mutex_);
    std::ofstream out(path_, std::ios::app);
    for (const auto& [raw, canonical] : changes) out << raw << '\t' << canonical << '\t' << version << '\n';
    out.flush();
    if (!out) throw StorageError("cannot append to mapping store " + path_.string());
}

void MappingStore::compact(const ConsolidationMap& map) {
    std::lock_guard lock(mutex_);
    auto tmp = path_;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        for (const auto& [raw, canonical] : map.entries) out << raw << '\t' << canonical << '\t' << map.version << '\n';
        out.flush();
        if (!out) throw StorageError("cannot write mapping store " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path_, ec);
    if (ec) throw StorageError("cannot replace mapping store " + path_.string() + ": " + ec.message());
}

AspectVocabulary::Listener MappingStore::listener() {
    return [this](const MappingChanges& changes, std::uint64_t version) { append(changes, version); };
}

}  // namespace aspectsum
