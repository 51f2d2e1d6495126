// Copyright 2026 The convsearch authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <compare>
#include <cstddef>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace convsearch {

// Corpus partition label. Canonical values are "clapnq", "cloud", "fiqa"
// and "govt" but the set is open for new corpora. Must be non-empty,
// lowercase and free of whitespace.
class Domain {
public:
    Domain() = default;
    explicit Domain(std::string name);

    const std::string& name() const noexcept { return name_; }
    bool empty() const noexcept { return name_.empty(); }

    friend bool operator==(const Domain&, const Domain&) = default;
    friend auto operator<=>(const Domain&, const Domain&) = default;

private:
    std::string name_;
};

// One indexed retrieval unit.
struct Passage {
    std::string id;
    std::string doc_id;
    std::string text;
    Domain domain;
};

// In-memory passage collection. Immutable once loaded; iteration order is
// ingestion order and position_of is a bijection onto positions.
class Corpus {
public:
    Corpus() = default;
    explicit Corpus(Domain domain) : domain_(std::move(domain)) {}

    // Appends a passage. Throws DataError on duplicate id or blank text.
    void add(Passage passage);

    std::size_t size() const noexcept { return passages_.size(); }
    bool empty() const noexcept { return passages_.empty(); }
    const Domain& domain() const noexcept { return domain_; }

    const Passage& at(std::size_t position) const { return passages_.at(position); }
    std::optional<std::size_t> position_of(const std::string& id) const;
    const Passage* find(const std::string& id) const;
    const std::vector<Passage>& passages() const noexcept { return passages_; }

private:
    Domain domain_;
    std::vector<Passage> passages_;
    std::unordered_map<std::string, std::size_t> index_of_;
};

// Reads a JSONL corpus file: one {"id", "doc_id", "text", "domain"} object
// per line, unknown fields ignored. Throws DataError naming the line on
// malformed records and naming the id on duplicates.
Corpus load_corpus(const std::string& path, const Domain& domain);

// Writes the corpus back as JSONL (LF line endings). load_corpus(write(c))
// reproduces c exactly.
void write_corpus(const Corpus& corpus, const std::string& path);

// Splits a document into whitespace-token chunks of chunk_tokens length
// with overlap_tokens shared between consecutive chunks. Chunk ids are
// "<doc_id>-<ordinal>" with zero-based ordinals. Throws ConfigError when
// overlap_tokens >= chunk_tokens and DataError on empty text.
std::vector<Passage> chunk_document(const std::string& doc_id, const std::string& text,
                                    std::size_t chunk_tokens, std::size_t overlap_tokens,
                                    const Domain& domain);

}  // namespace convsearch
