// Copyright 2026 The convsearch authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "convsearch/corpus.hpp"
#include "convsearch/ranked_list.hpp"
#include "convsearch/tokenizer.hpp"

namespace convsearch {

struct Bm25Params {
    double k1 = 1.5;
    double b = 0.75;
};

struct Posting {
    std::uint32_t position = 0;   // passage position in corpus order
    std::uint32_t term_freq = 0;
};

// BM25 inverted index. Scoring:
//
//   score(q, d) = sum over unique query terms t of
//                 IDF(t) * tf * (k1 + 1) / (tf + k1 * (1 - b + b * dl / avgdl))
//   IDF(t)      = ln(1 + (N - df + 0.5) / (df + 0.5))
//
// IDF is always positive, so scores are non-negative and a passage scores
// zero iff it contains no query term. Immutable after build; concurrent
// searches are safe.
class InvertedIndex {
public:
    InvertedIndex() = default;

    // Score a single passage position against a query token list.
    double score(const std::vector<std::string>& query, std::size_t position) const;

    // Exhaustive top-k: score descending, ties by ascending passage id,
    // zero-scoring passages excluded. source_tag is "bm25".
    RankedList search(const std::vector<std::string>& query, std::size_t k) const;

    std::size_t num_docs() const noexcept { return doc_lengths_.size(); }
    double avg_doc_length() const noexcept { return avg_doc_length_; }
    std::uint32_t doc_length(std::size_t position) const { return doc_lengths_.at(position); }
    const Bm25Params& params() const noexcept { return params_; }
    const std::string& passage_id(std::size_t position) const { return ids_.at(position); }
    std::size_t vocabulary_size() const noexcept { return postings_.size(); }

    // Posting list for a term (sorted by position), or nullptr.
    const std::vector<Posting>* postings(const std::string& term) const;

    // Assembles an index from persisted parts (snapshot I/O and tests).
    static InvertedIndex from_parts(std::vector<std::string> ids,
                                    std::vector<std::uint32_t> doc_lengths,
                                    std::unordered_map<std::string, std::vector<Posting>> postings,
                                    Bm25Params params);

    // Deterministic iteration over the vocabulary (sorted terms).
    std::vector<std::string> terms_sorted() const;

private:
    double term_contribution(const std::vector<Posting>& plist, std::uint32_t term_freq,
                             std::size_t position) const;

    std::unordered_map<std::string, std::vector<Posting>> postings_;
    std::vector<std::uint32_t> doc_lengths_;
    std::vector<std::string> ids_;
    double avg_doc_length_ = 0.0;
    Bm25Params params_;
};

InvertedIndex build_lexical_index(const Corpus& corpus, const Tokenizer& tokenizer,
                                  Bm25Params params = {});

}  // namespace convsearch
