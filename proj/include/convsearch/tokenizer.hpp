// Copyright 2026 The convsearch authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace convsearch {

// Query/passage analyzer: lowercases, splits on maximal runs of
// non-alphanumeric characters and removes stopwords. No stemming, so exact
// technical terms ("kubernetes", "401", "k") survive intact.
class Tokenizer {
public:
    // No stopword filtering.
    Tokenizer() = default;
    explicit Tokenizer(std::unordered_set<std::string> stopwords)
        : stopwords_(std::move(stopwords)) {}

    // Pinned English list shipped with the repo (data/stopwords_en.txt),
    // compiled into the library so the binary needs no data path.
    static Tokenizer with_default_stopwords();

    // Stopword file: one lowercase token per line, '#' starts a comment.
    static Tokenizer from_file(const std::string& path);
    static Tokenizer from_text(const std::string& text);

    // Lowercase alphanumeric runs, stopwords kept.
    static std::vector<std::string> split(std::string_view text);

    std::vector<std::string> tokenize(std::string_view text) const;

    bool is_stopword(const std::string& token) const { return stopwords_.contains(token); }
    std::size_t stopword_count() const noexcept { return stopwords_.size(); }

private:
    std::unordered_set<std::string> stopwords_;
};

// Raw content of the pinned stopword list (generated from
// data/stopwords_en.txt at build time).
const std::string& default_stopword_text();

}  // namespace convsearch
