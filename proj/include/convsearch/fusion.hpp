// Copyright 2026 The convsearch authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "convsearch/ranked_list.hpp"

namespace convsearch {

struct RrfConfig {
    double k = 60.0;
};

// Reciprocal Rank Fusion. Every passage d appearing in at least one input
// list scores
//
//   score_RRF(d) = sum over lists r containing d of 1 / (k + rank_r(d))
//
// with 1-based ranks; absence from a list contributes nothing. Output is
// the full union of input ids sorted by fused score descending, ties by
// ascending passage id (truncation is the caller's job). Generalizes to
// any number of lists, which is how multi-query expansion merges results.
//
// Throws ConfigError for an empty list collection or non-positive k, and
// DataError if an input list repeats a passage id. Empty individual lists
// are fine.
RankedList rrf_fuse(const std::vector<RankedList>& lists, const RrfConfig& config = {});

}  // namespace convsearch
