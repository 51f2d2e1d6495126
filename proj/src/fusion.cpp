// Copyright 2026 The convsearch authors
// SPDX-License-Identifier: Apache-2.0

#include "convsearch/fusion.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

#include "convsearch/errors.hpp"

namespace convsearch {

void validate_ranked_list(const RankedList& list) {
    std::unordered_set<std::string_view> seen;
    for (std::size_t i = 0; i < list.entries.size(); ++i) {
        const ScoredEntry& entry = list.entries[i];
        if (!seen.insert(entry.passage_id).second) {
            throw DataError("ranked list '" + list.source_tag + "' repeats passage id '" +
                            entry.passage_id + "'");
        }
        if (i > 0 && list.entries[i - 1].score < entry.score) {
            throw DataError("ranked list '" + list.source_tag + "' scores increase at rank " +
                            std::to_string(i + 1));
        }
    }
}

RankedList rrf_fuse(const std::vector<RankedList>& lists, const RrfConfig& config) {
    if (lists.empty()) {
        throw ConfigError("rrf_fuse needs at least one input list");
    }
    if (config.k <= 0.0) {
        throw ConfigError("rrf k must be positive");
    }
    for (const RankedList& list : lists) {
        validate_ranked_list(list);
    }

    // Accumulation order is fixed (lists in the given order), so fused
    // scores are reproducible bit for bit.
    std::unordered_map<std::string, double> fused;
    for (const RankedList& list : lists) {
        for (std::size_t i = 0; i < list.entries.size(); ++i) {
            const double rank = static_cast<double>(i + 1);
            fused[list.entries[i].passage_id] += 1.0 / (config.k + rank);
        }
    }

    RankedList result;
    result.source_tag = "rrf";
    result.entries.reserve(fused.size());
    for (auto& [id, score] : fused) {
        result.entries.push_back(ScoredEntry{id, score});
    }
    std::sort(result.entries.begin(), result.entries.end(), ranks_before);
    return result;
}

}  // namespace convsearch
