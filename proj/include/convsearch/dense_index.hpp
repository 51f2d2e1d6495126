// Copyright 2026 The convsearch authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "convsearch/corpus.hpp"
#include "convsearch/ranked_list.hpp"

namespace convsearch {

using EmbeddingVector = std::vector<float>;

// What normalize() does with an all-zero vector: "reject" errors out,
// "keep_zero" passes the zero vector through (it scores 0 everywhere).
enum class ZeroVectorPolicy { reject, keep_zero };

// Returns v / ||v||2. Throws DataError for a zero vector under reject.
EmbeddingVector normalize(EmbeddingVector v, ZeroVectorPolicy policy = ZeroVectorPolicy::reject);

// Source of query/passage embeddings. Implementations must be
// deterministic: the same input always yields the same vector.
class EmbeddingProvider {
public:
    virtual ~EmbeddingProvider() = default;

    virtual std::vector<EmbeddingVector> embed_texts(const std::vector<std::string>& texts) = 0;

    // Passage embedding carries the ids so keyed stores can look vectors up
    // by passage id. Default ignores ids.
    virtual std::vector<EmbeddingVector> embed_passages(const std::vector<std::string>& ids,
                                                        const std::vector<std::string>& texts) {
        (void)ids;
        return embed_texts(texts);
    }
};

// Deterministic test embedder: L2-normalized feature-hashed token counts.
// Each lowercase alphanumeric token hashes into one of `dim` buckets with a
// fixed seed, so equal texts embed identically and exact-match texts score
// cosine 1.0.
class HashingEmbeddingProvider : public EmbeddingProvider {
public:
    explicit HashingEmbeddingProvider(std::size_t dim = 768, std::uint64_t seed = 42);

    std::vector<EmbeddingVector> embed_texts(const std::vector<std::string>& texts) override;

    std::size_t dim() const noexcept { return dim_; }

private:
    std::size_t dim_;
    std::uint64_t seed_;
};

// Precomputed vectors loaded from a JSONL file of {"key", "vector"}
// records. Passages are keyed by passage id, queries by the query string.
class FileEmbeddingStore : public EmbeddingProvider {
public:
    explicit FileEmbeddingStore(const std::string& path);

    std::vector<EmbeddingVector> embed_texts(const std::vector<std::string>& texts) override;
    std::vector<EmbeddingVector> embed_passages(const std::vector<std::string>& ids,
                                                const std::vector<std::string>& texts) override;

    std::size_t size() const noexcept { return vectors_.size(); }

private:
    std::vector<EmbeddingVector> lookup(const std::vector<std::string>& keys) const;

    std::unordered_map<std::string, EmbeddingVector> vectors_;
    std::string path_;
};

// Exact inner-product index over unit-norm rows, one per passage in corpus
// order. Search is an exhaustive scan; with normalized inputs the inner
// product equals cosine similarity. Immutable after build.
class DenseIndex {
public:
    DenseIndex() = default;

    // Top-k by inner product descending, ties by ascending passage id. The
    // query is normalized before scoring. Throws DataError on dimension
    // mismatch.
    RankedList search(const EmbeddingVector& query, std::size_t k,
                      ZeroVectorPolicy policy = ZeroVectorPolicy::reject) const;

    std::size_t dim() const noexcept { return dim_; }
    std::size_t size() const noexcept { return ids_.size(); }
    std::span<const float> row(std::size_t position) const;
    const std::string& passage_id(std::size_t position) const { return ids_.at(position); }
    const std::vector<float>& data() const noexcept { return data_; }

    static DenseIndex from_parts(std::vector<std::string> ids, std::size_t dim,
                                 std::vector<float> data);

private:
    std::vector<std::string> ids_;
    std::vector<float> data_;   // row-major, ids_.size() x dim_
    std::size_t dim_ = 0;
};

// Embeds every passage and normalizes the rows. expected_dim 0 means infer
// from the first vector; a mismatch anywhere names the offending passage.
DenseIndex build_dense_index(const Corpus& corpus, EmbeddingProvider& provider,
                             ZeroVectorPolicy policy = ZeroVectorPolicy::reject,
                             std::size_t expected_dim = 0);

}  // namespace convsearch
