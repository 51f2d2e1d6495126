// Copyright 2026 The convsearch authors
// SPDX-License-Identifier: Apache-2.0

#include "convsearch/lexical_index.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_set>

#include "convsearch/errors.hpp"

namespace convsearch {

namespace {

// First-occurrence order, duplicates dropped. BM25 has unique-term
// semantics: ["b","b"] scores the same as ["b"].
std::vector<const std::string*> unique_terms(const std::vector<std::string>& query) {
    std::vector<const std::string*> unique;
    std::unordered_set<std::string_view> seen;
    unique.reserve(query.size());
    for (const auto& term : query) {
        if (seen.insert(term).second) {
            unique.push_back(&term);
        }
    }
    return unique;
}

const Posting* find_posting(const std::vector<Posting>& plist, std::size_t position) {
    auto it = std::lower_bound(plist.begin(), plist.end(), position,
                               [](const Posting& p, std::size_t pos) { return p.position < pos; });
    if (it == plist.end() || it->position != position) {
        return nullptr;
    }
    return &*it;
}

}  // namespace

double InvertedIndex::term_contribution(const std::vector<Posting>& plist,
                                        std::uint32_t term_freq, std::size_t position) const {
    const double n = static_cast<double>(num_docs());
    const double df = static_cast<double>(plist.size());
    const double idf = std::log(1.0 + (n - df + 0.5) / (df + 0.5));
    const double tf = static_cast<double>(term_freq);
    const double dl = static_cast<double>(doc_lengths_[position]);
    const double length_ratio = avg_doc_length_ > 0.0 ? dl / avg_doc_length_ : 0.0;
    const double norm = params_.k1 * (1.0 - params_.b + params_.b * length_ratio);
    return idf * (tf * (params_.k1 + 1.0)) / (tf + norm);
}

double InvertedIndex::score(const std::vector<std::string>& query, std::size_t position) const {
    if (position >= num_docs()) {
        throw DataError("bm25 score: passage position " + std::to_string(position) +
                        " out of range (corpus size " + std::to_string(num_docs()) + ")");
    }
    double total = 0.0;
    for (const std::string* term : unique_terms(query)) {
        auto it = postings_.find(*term);
        if (it == postings_.end()) {
            continue;
        }
        const Posting* posting = find_posting(it->second, position);
        if (posting == nullptr) {
            continue;
        }
        total += term_contribution(it->second, posting->term_freq, position);
    }
    return total;
}

RankedList InvertedIndex::search(const std::vector<std::string>& query, std::size_t k) const {
    RankedList result;
    result.source_tag = "bm25";
    if (k == 0 || num_docs() == 0) {
        return result;
    }

    // Term-at-a-time accumulation. Per passage the contributions arrive in
    // the same unique-term order score() uses, so both paths agree bitwise.
    std::vector<double> scores(num_docs(), 0.0);
    std::vector<std::uint32_t> touched;
    std::vector<char> seen(num_docs(), 0);
    for (const std::string* term : unique_terms(query)) {
        auto it = postings_.find(*term);
        if (it == postings_.end()) {
            continue;
        }
        for (const Posting& posting : it->second) {
            scores[posting.position] += term_contribution(it->second, posting.term_freq, posting.position);
            if (!seen[posting.position]) {
                seen[posting.position] = 1;
                touched.push_back(posting.position);
            }
        }
    }

    std::sort(touched.begin(), touched.end(), [&](std::uint32_t a, std::uint32_t b) {
        if (scores[a] != scores[b]) {
            return scores[a] > scores[b];
        }
        return ids_[a] < ids_[b];
    });

    const std::size_t count = std::min(k, touched.size());
    result.entries.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        result.entries.push_back(ScoredEntry{ids_[touched[i]], scores[touched[i]]});
    }
    return result;
}

const std::vector<Posting>* InvertedIndex::postings(const std::string& term) const {
    auto it = postings_.find(term);
    return it == postings_.end() ? nullptr : &it->second;
}

std::vector<std::string> InvertedIndex::terms_sorted() const {
    std::vector<std::string> terms;
    terms.reserve(postings_.size());
    for (const auto& [term, plist] : postings_) {
        terms.push_back(term);
    }
    std::sort(terms.begin(), terms.end());
    return terms;
}

InvertedIndex InvertedIndex::from_parts(std::vector<std::string> ids,
                                        std::vector<std::uint32_t> doc_lengths,
                                        std::unordered_map<std::string, std::vector<Posting>> postings,
                                        Bm25Params params) {
    if (ids.size() != doc_lengths.size()) {
        throw DataError("inverted index parts disagree on corpus size");
    }
    InvertedIndex index;
    index.ids_ = std::move(ids);
    index.doc_lengths_ = std::move(doc_lengths);
    index.postings_ = std::move(postings);
    index.params_ = params;
    if (!index.doc_lengths_.empty()) {
        double total = 0.0;
        for (std::uint32_t length : index.doc_lengths_) {
            total += static_cast<double>(length);
        }
        index.avg_doc_length_ = total / static_cast<double>(index.doc_lengths_.size());
    }
    return index;
}

InvertedIndex build_lexical_index(const Corpus& corpus, const Tokenizer& tokenizer,
                                  Bm25Params params) {
    std::vector<std::string> ids;
    std::vector<std::uint32_t> doc_lengths;
    std::unordered_map<std::string, std::vector<Posting>> postings;
    ids.reserve(corpus.size());
    doc_lengths.reserve(corpus.size());

    for (std::size_t position = 0; position < corpus.size(); ++position) {
        const Passage& passage = corpus.at(position);
        ids.push_back(passage.id);
        const std::vector<std::string> tokens = tokenizer.tokenize(passage.text);
        doc_lengths.push_back(static_cast<std::uint32_t>(tokens.size()));

        // Local counts in sorted order keep posting construction deterministic.
        std::map<std::string, std::uint32_t> counts;
        for (const auto& token : tokens) {
            ++counts[token];
        }
        for (auto& [term, freq] : counts) {
            postings[term].push_back(Posting{static_cast<std::uint32_t>(position), freq});
        }
    }
    return InvertedIndex::from_parts(std::move(ids), std::move(doc_lengths), std::move(postings), params);
}

}  // namespace convsearch
