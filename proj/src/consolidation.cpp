#include "aspectsum/consolidation.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <set>
#include <stdexcept>
#include <variant>

#include "aspectsum/errors.hpp"
#include "aspectsum/text.hpp"

namespace aspectsum {

FrequencyTable build_frequency_table(std::span<const ExtractionResult> results) {
    FrequencyTable table;
    for (const auto& r : results) {
        for (const auto& m : r.mentions) {
            auto aspect = normalize_aspect(m.aspect);
            if (!aspect.empty()) ++table[aspect];
        }
    }
    return table;
}

std::uint64_t compute_threshold(const FrequencyTable& table, double percentile) {
    if (table.empty()) throw ValidationError("cannot compute a threshold from an empty frequency table");
    if (!(percentile > 0.0 && percentile <= 1.0)) throw ValidationError("percentile must be in (0, 1]");
    std::vector<std::uint64_t> freqs;
    freqs.reserve(table.size());
    for (const auto& [aspect, f] : table) freqs.push_back(f);
    std::sort(freqs.begin(), freqs.end());
    // Percentile in parts per million keeps the ceiling exact (0.95 * 20 is 19, not 19.000000000000004).
    const auto ppm = static_cast<std::uint64_t>(std::llround(percentile * 1'000'000.0));
    const std::uint64_t n = freqs.size();
    auto rank = (ppm * n + 999'999) / 1'000'000;
    rank = std::clamp<std::uint64_t>(rank, 1, n);
    return freqs[rank - 1];
}

std::string format_aspect_list(const std::vector<std::string>& aspects) {
    std::string out;
    for (const auto& a : aspects) {
        if (!out.empty()) out += '\n';
        out += "- " + a;
    }
    return out;
}

namespace {

struct MappingRequest {
    std::map<std::string, std::string> resolved;
    std::vector<std::string> failed;
    std::size_t calls = 0;
};

MappingRequest request_mappings(const std::vector<std::string>& aspects, const LlmGateway& gateway,
                                const TemplateSet& templates) {
    MappingRequest out;
    for (std::size_t start = 0; start < aspects.size(); start += kConsolidationBatchSize) {
        const auto end = std::min(aspects.size(), start + kConsolidationBatchSize);
        std::vector<std::string> chunk(aspects.begin() + static_cast<std::ptrdiff_t>(start),
                                       aspects.begin() + static_cast<std::ptrdiff_t>(end));
        std::map<std::string, std::string> answers;
        ++out.calls;
        try {
            auto prompt = templates.render(TemplateId::AspectConsolidation, {{"aspects", format_aspect_list(chunk)}});
            auto outcome = gateway.complete_structured(gateway.make_call(TemplateId::AspectConsolidation, prompt));
            for (const auto& [raw, canonical] : std::get<ConsolidationPayload>(*outcome.parsed).mappings) {
                auto key = normalize_aspect(raw);
                auto value = normalize_aspect(canonical);
                if (!key.empty()) answers.emplace(key, value.empty() ? key : value);
            }
        } catch (const Error&) {
            answers.clear();
        }
        for (const auto& a : chunk) {
            auto it = answers.find(a);
            if (it == answers.end()) {
                out.failed.push_back(a);
            } else {
                out.resolved[a] = it->second;
            }
        }
    }
    return out;
}

class Committer {
public:
    explicit Committer(ConsolidationMap& map) : map_(map) {}

    void set(const std::string& key, const std::string& value) {
        auto [it, inserted] = map_.entries.try_emplace(key, value);
        if (inserted) {
            touched_.insert(key);
        } else if (it->second != value) {
            it->second = value;
            touched_.insert(key);
        }
    }

    void ensure_fixed_point(const std::string& key) {
        if (!map_.entries.count(key)) set(key, key);
    }

    // Points every entry at the end of its chain; a cycle is cut where it closes.
    void compress() {
        std::vector<std::string> keys;
        keys.reserve(map_.entries.size());
        for (const auto& [k, v] : map_.entries) keys.push_back(k);
        for (const auto& start : keys) {
            std::vector<std::string> path;
            std::set<std::string> on_path;
            std::string cur = start;
            while (true) {
                ensure_fixed_point(cur);
                const std::string next = map_.entries.at(cur);
                if (next == cur) break;
                if (!on_path.insert(cur).second) {
                    set(cur, cur);
                    break;
                }
                path.push_back(cur);
                cur = next;
            }
            for (const auto& p : path) set(p, cur);
        }
    }

    MappingChanges changes() const {
        MappingChanges out;
        for (const auto& k : touched_) out.emplace_back(k, map_.entries.at(k));
        return out;
    }

private:
    ConsolidationMap& map_;
    std::set<std::string> touched_;
};

// Writes LLM answers and failures into the map and restores the invariants.
MappingChanges commit(ConsolidationMap& map, const MappingRequest& request) {
    Committer c(map);
    for (const auto& [raw, canonical] : request.resolved) {
        map.pending.erase(raw);
        c.set(raw, canonical);
    }
    for (const auto& [raw, canonical] : request.resolved) c.ensure_fixed_point(canonical);
    for (const auto& a : request.failed) {
        c.set(a, a);
        map.pending.insert(a);
    }
    if (map.threshold > 0) {
        for (const auto& [aspect, f] : map.frequency) {
            if (f >= map.threshold) {
                c.set(aspect, aspect);
                map.pending.erase(aspect);
            }
        }
    }
    c.compress();
    return c.changes();
}

}  // namespace

void restore_fixed_points(ConsolidationMap& map) { Committer(map).compress(); }

ConsolidationMap consolidate_batch(const FrequencyTable& table, ConsolidationMap map, const LlmGateway& gateway,
                                   const TemplateSet& templates, ConsolidationReport* report) {
    if (map.threshold == 0) throw ConfigError("consolidation threshold is not set");
    for (const auto& [aspect, f] : table) map.frequency[aspect] += f;

    std::set<std::string> to_send(map.pending.begin(), map.pending.end());
    for (const auto& [aspect, f] : table) {
        if (map.frequency[aspect] >= map.threshold) continue;
        if (!map.entries.count(aspect)) to_send.insert(aspect);
    }
    for (auto it = to_send.begin(); it != to_send.end();) {
        auto f = map.frequency.find(*it);
        it = (f != map.frequency.end() && f->second >= map.threshold) ? to_send.erase(it) : std::next(it);
    }

    std::vector<std::string> aspects(to_send.begin(), to_send.end());
    auto request = request_mappings(aspects, gateway, templates);
    auto changes = commit(map, request);
    ++map.version;
    if (report) {
        report->llm_calls += request.calls;
        report->aspects_sent += aspects.size();
        report->failed.insert(report->failed.end(), request.failed.begin(), request.failed.end());
        report->changed = std::move(changes);
    }
    return map;
}

ExtractionResult map_mentions(const ExtractionResult& result,
                              const std::function<std::string(const std::string&)>& canon) {
    ExtractionResult out = result;
    out.mentions.clear();
    for (const auto& m : result.mentions) {
        auto aspect = canon(m.aspect);
        auto it = std::find_if(out.mentions.begin(), out.mentions.end(),
                               [&](const AspectMention& x) { return x.aspect == aspect; });
        if (it == out.mentions.end()) {
            out.mentions.push_back({std::move(aspect), m.sentiment});
        } else if (it->sentiment != m.sentiment) {
            it->sentiment = Sentiment::Mixed;
        }
    }
    return out;
}

std::vector<ExtractionResult> apply_mapping(std::span<const ExtractionResult> results, const ConsolidationMap& map) {
    std::vector<ExtractionResult> out;
    out.reserve(results.size());
    auto canon = [&](const std::string& a) -> std::string {
        auto it = map.entries.find(a);
        if (it == map.entries.end()) throw std::out_of_range("no consolidation entry for aspect '" + a + "'");
        return it->second;
    };
    for (const auto& r : results) out.push_back(map_mentions(r, canon));
    return out;
}

AspectVocabulary::AspectVocabulary(const LlmGateway& gateway, const TemplateSet& templates, ConsolidationMap map)
    : gateway_(gateway), templates_(templates), map_(std::move(map)) {}

std::optional<std::string> AspectVocabulary::lookup(const std::string& aspect) const {
    std::shared_lock lock(mutex_);
    return map_.lookup(aspect);
}

std::string AspectVocabulary::resolve(const std::string& aspect) { return resolve_all({aspect}).front(); }

std::vector<std::string> AspectVocabulary::resolve_all(const std::vector<std::string>& raw) {
    std::vector<std::string> aspects;
    aspects.reserve(raw.size());
    for (const auto& a : raw) {
        aspects.push_back(normalize_aspect(a));
        if (aspects.back().empty()) throw ValidationError("cannot resolve an empty aspect");
    }
    std::vector<std::string> out(aspects.size());
    std::vector<std::size_t> missing;
    {
        std::shared_lock lock(mutex_);
        for (std::size_t i = 0; i < aspects.size(); ++i) {
            auto it = map_.entries.find(aspects[i]);
            if (it == map_.entries.end()) {
                missing.push_back(i);
            } else {
                out[i] = it->second;
            }
        }
    }
    if (missing.empty()) return out;

    std::unique_lock lock(mutex_);
    std::set<std::string> unseen;
    for (auto i : missing) {
        if (!map_.entries.count(aspects[i])) unseen.insert(aspects[i]);
    }
    if (!unseen.empty()) {
        auto request = request_mappings({unseen.begin(), unseen.end()}, gateway_, templates_);
        llm_calls_ += request.calls;
        auto changes = commit(map_, request);
        ++map_.version;
        if (listener_) listener_(changes, map_.version);
    }
    for (auto i : missing) out[i] = map_.entries.at(aspects[i]);
    return out;
}

void AspectVocabulary::consolidate(const FrequencyTable& table, ConsolidationReport* report) {
    std::unique_lock lock(mutex_);
    ConsolidationReport local;
    map_ = consolidate_batch(table, std::move(map_), gateway_, templates_, &local);
    llm_calls_ += local.llm_calls;
    if (listener_) listener_(local.changed, map_.version);
    if (report) *report = std::move(local);
}

void AspectVocabulary::set_threshold(std::uint64_t threshold) {
    std::unique_lock lock(mutex_);
    map_.threshold = threshold;
}

ConsolidationMap AspectVocabulary::snapshot() const {
    std::shared_lock lock(mutex_);
    return map_;
}

void AspectVocabulary::set_listener(Listener listener) {
    std::unique_lock lock(mutex_);
    listener_ = std::move(listener);
}

std::vector<ExtractionResult> AspectVocabulary::apply(std::span<const ExtractionResult> results) {
    std::set<std::string> aspects;
    for (const auto& r : results)
        for (const auto& m : r.mentions) aspects.insert(m.aspect);
    std::vector<std::string> list(aspects.begin(), aspects.end());
    auto canon = resolve_all(list);
    std::map<std::string, std::string> table;
    for (std::size_t i = 0; i < list.size(); ++i) table.emplace(list[i], canon[i]);
    std::vector<ExtractionResult> out;
    out.reserve(results.size());
    for (const auto& r : results) out.push_back(map_mentions(r, [&](const std::string& a) { return table.at(a); }));
    return out;
}

}  // namespace aspectsum
