// Copyright 2026 The convsearch authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

namespace convsearch {

struct ScoredEntry {
    std::string passage_id;
    double score = 0.0;
};

// Ordered retrieval output shared by every stage. Invariants: scores are
// non-increasing and passage ids are unique within the list. source_tag
// identifies the producing stage ("bm25", "dense", "rrf", "rerank").
struct RankedList {
    std::vector<ScoredEntry> entries;
    std::string source_tag;

    std::size_t size() const noexcept { return entries.size(); }
    bool empty() const noexcept { return entries.empty(); }
};

// Global ordering rule: score descending, ties by ascending passage id.
// Every stage sorts with this comparator so output is deterministic.
inline bool ranks_before(const ScoredEntry& a, const ScoredEntry& b) {
    if (a.score != b.score) {
        return a.score > b.score;
    }
    return a.passage_id < b.passage_id;
}

// Throws DataError if the RankedList invariants are violated.
void validate_ranked_list(const RankedList& list);

}  // namespace convsearch
