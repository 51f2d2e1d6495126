// Copyright 2026 The convsearch authors
// SPDX-License-Identifier: Apache-2.0

#include "convsearch/dense_index.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include <json.hpp>

#include "convsearch/errors.hpp"
#include "convsearch/tokenizer.hpp"

namespace convsearch {

namespace {

constexpr std::size_t kEmbedBatch = 64;

std::uint64_t fnv1a64(std::string_view data, std::uint64_t seed) {
    std::uint64_t hash = 14695981039346656037ULL ^ seed;
    for (unsigned char c : data) {
        hash ^= c;
        hash *= 1099511628211ULL;
    }
    return hash;
}

double dot(std::span<const float> a, std::span<const float> b) {
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        sum += static_cast<double>(a[i]) * static_cast<double>(b[i]);
    }
    return sum;
}

}  // namespace

EmbeddingVector normalize(EmbeddingVector v, ZeroVectorPolicy policy) {
    double norm_sq = 0.0;
    for (float x : v) {
        norm_sq += static_cast<double>(x) * static_cast<double>(x);
    }
    if (norm_sq == 0.0) {
        if (policy == ZeroVectorPolicy::reject) {
            throw DataError("cannot normalize a zero vector");
        }
        return v;
    }
    const double inv = 1.0 / std::sqrt(norm_sq);
    for (float& x : v) {
        x = static_cast<float>(static_cast<double>(x) * inv);
    }
    return v;
}

HashingEmbeddingProvider::HashingEmbeddingProvider(std::size_t dim, std::uint64_t seed)
    : dim_(dim), seed_(seed) {
    if (dim_ == 0) {
        throw ConfigError("embedding dimension must be positive");
    }
}

std::vector<EmbeddingVector> HashingEmbeddingProvider::embed_texts(
    const std::vector<std::string>& texts) {
    std::vector<EmbeddingVector> out;
    out.reserve(texts.size());
    for (const auto& text : texts) {
        std::vector<std::string> tokens = Tokenizer::split(text);
        if (tokens.empty()) {
            tokens.emplace_back();   // tokenless text hashes as one empty token
        }
        EmbeddingVector vec(dim_, 0.0f);
        for (const auto& token : tokens) {
            vec[fnv1a64(token, seed_) % dim_] += 1.0f;
        }
        out.push_back(normalize(std::move(vec), ZeroVectorPolicy::reject));
    }
    return out;
}

FileEmbeddingStore::FileEmbeddingStore(const std::string& path) : path_(path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw DataError("cannot open embedding store '" + path + "'");
    }
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        nlohmann::json record;
        try {
            record = nlohmann::json::parse(line);
            auto key = record.at("key").get<std::string>();
            auto values = record.at("vector").get<std::vector<float>>();
            vectors_[std::move(key)] = std::move(values);
        } catch (const nlohmann::json::exception& e) {
            throw DataError(path + ":" + std::to_string(line_no) +
                            ": malformed embedding record: " + e.what());
        }
    }
}

std::vector<EmbeddingVector> FileEmbeddingStore::lookup(const std::vector<std::string>& keys) const {
    std::vector<EmbeddingVector> out;
    out.reserve(keys.size());
    for (const auto& key : keys) {
        auto it = vectors_.find(key);
        if (it == vectors_.end()) {
            throw DataError("embedding store '" + path_ + "' has no vector for key '" + key + "'");
        }
        out.push_back(it->second);
    }
    return out;
}

std::vector<EmbeddingVector> FileEmbeddingStore::embed_texts(const std::vector<std::string>& texts) {
    return lookup(texts);
}

std::vector<EmbeddingVector> FileEmbeddingStore::embed_passages(
    const std::vector<std::string>& ids, const std::vector<std::string>& texts) {
    (void)texts;
    return lookup(ids);
}

std::span<const float> DenseIndex::row(std::size_t position) const {
    return std::span<const float>(data_.data() + position * dim_, dim_);
}

RankedList DenseIndex::search(const EmbeddingVector& query, std::size_t k,
                              ZeroVectorPolicy policy) const {
    RankedList result;
    result.source_tag = "dense";
    if (k == 0 || size() == 0) {
        return result;
    }
    if (query.size() != dim_) {
        throw DataError("query dimension " + std::to_string(query.size()) +
                        " does not match index dimension " + std::to_string(dim_));
    }
    const EmbeddingVector q = normalize(query, policy);

    std::vector<double> scores(size());
    for (std::size_t i = 0; i < size(); ++i) {
        scores[i] = dot(row(i), q);
    }

    std::vector<std::size_t> order(size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (scores[a] != scores[b]) {
            return scores[a] > scores[b];
        }
        return ids_[a] < ids_[b];
    });

    const std::size_t count = std::min(k, size());
    result.entries.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        result.entries.push_back(ScoredEntry{ids_[order[i]], scores[order[i]]});
    }
    return result;
}

DenseIndex DenseIndex::from_parts(std::vector<std::string> ids, std::size_t dim,
                                  std::vector<float> data) {
    if (dim == 0 && !ids.empty()) {
        throw DataError("dense index parts: dimension must be positive");
    }
    if (ids.size() * dim != data.size()) {
        throw DataError("dense index parts: matrix shape does not match id count");
    }
    DenseIndex index;
    index.ids_ = std::move(ids);
    index.dim_ = dim;
    index.data_ = std::move(data);
    return index;
}

DenseIndex build_dense_index(const Corpus& corpus, EmbeddingProvider& provider,
                             ZeroVectorPolicy policy, std::size_t expected_dim) {
    std::vector<std::string> ids;
    std::vector<float> data;
    std::size_t dim = expected_dim;
    ids.reserve(corpus.size());

    for (std::size_t offset = 0; offset < corpus.size(); offset += kEmbedBatch) {
        const std::size_t end = std::min(offset + kEmbedBatch, corpus.size());
        std::vector<std::string> batch_ids;
        std::vector<std::string> batch_texts;
        for (std::size_t i = offset; i < end; ++i) {
            batch_ids.push_back(corpus.at(i).id);
            batch_texts.push_back(corpus.at(i).text);
        }
        std::vector<EmbeddingVector> vectors = provider.embed_passages(batch_ids, batch_texts);
        if (vectors.size() != batch_ids.size()) {
            throw DataError("embedding provider returned " + std::to_string(vectors.size()) +
                            " vectors for " + std::to_string(batch_ids.size()) + " passages");
        }
        for (std::size_t i = 0; i < vectors.size(); ++i) {
            EmbeddingVector& vec = vectors[i];
            if (dim == 0) {
                dim = vec.size();
            }
            if (vec.size() != dim) {
                throw DataError("embedding dimension mismatch for passage '" + batch_ids[i] +
                                "': got " + std::to_string(vec.size()) + ", expected " +
                                std::to_string(dim));
            }
            bool all_zero = true;
            for (float x : vec) {
                if (x != 0.0f) {
                    all_zero = false;
                    break;
                }
            }
            if (all_zero && policy == ZeroVectorPolicy::reject) {
                throw DataError("passage '" + batch_ids[i] + "' embeds to a zero vector");
            }
            vec = normalize(std::move(vec), policy);
            data.insert(data.end(), vec.begin(), vec.end());
            ids.push_back(batch_ids[i]);
        }
    }
    if (corpus.empty()) {
        dim = expected_dim;
    }
    return DenseIndex::from_parts(std::move(ids), dim, std::move(data));
}

}  // namespace convsearch
