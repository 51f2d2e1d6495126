// Copyright 2026 The convsearch authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <atomic>
#include <cstddef>
#include <string>
#include <vector>

#include "convsearch/corpus.hpp"
#include "convsearch/ranked_list.hpp"
#include "convsearch/tokenizer.hpp"

namespace convsearch {

struct RerankConfig {
    std::size_t pool_size = 50;
    std::size_t output_size = 10;
    std::size_t batch_size = 8;
};

// Cross-encoder style scorer: one relevance score per (query, passage)
// pair. Implementations must be deterministic for identical inputs and
// return exactly one score per passage.
class RerankScorer {
public:
    virtual ~RerankScorer() = default;
    virtual std::vector<double> score_pairs(const std::string& query,
                                            const std::vector<std::string>& passages) = 0;
};

// Deterministic test scorer: token-set overlap
// |tokenize(q) ∩ tokenize(p)| / |tokenize(q)|, zero for an empty query.
// Counts calls and scored passages so tests can assert pool discipline.
class OverlapRerankScorer : public RerankScorer {
public:
    explicit OverlapRerankScorer(Tokenizer tokenizer = Tokenizer())
        : tokenizer_(std::move(tokenizer)) {}

    std::vector<double> score_pairs(const std::string& query,
                                    const std::vector<std::string>& passages) override;

    std::size_t call_count() const noexcept { return calls_.load(); }
    std::size_t passages_scored() const noexcept { return scored_.load(); }
    void reset_counters() noexcept {
        calls_ = 0;
        scored_ = 0;
    }

private:
    Tokenizer tokenizer_;
    std::atomic<std::size_t> calls_{0};
    std::atomic<std::size_t> scored_{0};
};

// Re-scores the top pool_size fused candidates in batches of batch_size
// and returns the top output_size by scorer score (ties by ascending
// passage id). Fused scores are discarded once the pool is selected;
// candidates beyond pool_size are never scored or resurrected. Batch size
// only affects throughput, never results.
//
// Throws ConfigError for an invalid config (output_size > pool_size,
// batch_size 0) and DataError for a candidate id missing from the corpus.
RankedList rerank(const std::string& query, const RankedList& candidates, const Corpus& corpus,
                  RerankScorer& scorer, const RerankConfig& config = {});

}  // namespace convsearch
