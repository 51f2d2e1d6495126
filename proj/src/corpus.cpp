// Copyright 2026 The convsearch authors
// SPDX-License-Identifier: Apache-2.0

#include "convsearch/corpus.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "convsearch/errors.hpp"

namespace convsearch {

namespace {

bool is_trimmed_empty(const std::string& text) {
    for (unsigned char c : text) {
        if (!std::isspace(c)) {
            return false;
        }
    }
    return true;
}

}  // namespace

Domain::Domain(std::string name) : name_(std::move(name)) {
    if (name_.empty()) {
        throw DataError("domain name must be non-empty");
    }
    for (unsigned char c : name_) {
        if (std::isspace(c)) {
            throw DataError("domain name '" + name_ + "' contains whitespace");
        }
        if (std::isupper(c)) {
            throw DataError("domain name '" + name_ + "' must be lowercase");
        }
    }
}

void Corpus::add(Passage passage) {
    if (is_trimmed_empty(passage.text)) {
        throw DataError("passage '" + passage.id + "' has empty text");
    }
    auto [it, inserted] = index_of_.emplace(passage.id, passages_.size());
    if (!inserted) {
        throw DataError("duplicate passage id '" + passage.id + "'");
    }
    passages_.push_back(std::move(passage));
}

std::optional<std::size_t> Corpus::position_of(const std::string& id) const {
    auto it = index_of_.find(id);
    if (it == index_of_.end()) {
        return std::nullopt;
    }
    return it->second;
}

const Passage* Corpus::find(const std::string& id) const {
    auto position = position_of(id);
    return position ? &passages_[*position] : nullptr;
}

Corpus load_corpus(const std::string& path, const Domain& domain) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw DataError("cannot open corpus file '" + path + "'");
    }

    Corpus corpus(domain);
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
        } catch (const nlohmann::json::exception& e) {
            throw DataError(path + ":" + std::to_string(line_no) + ": malformed corpus record: " + e.what());
        }
        if (!record.is_object() || !record.contains("id") || !record.contains("text")) {
            throw DataError(path + ":" + std::to_string(line_no) + ": corpus record needs 'id' and 'text' fields");
        }
        Passage passage;
        try {
            passage.id = record.at("id").get<std::string>();
            passage.text = record.at("text").get<std::string>();
            passage.doc_id = record.value("doc_id", std::string{});
            passage.domain = record.contains("domain")
                                 ? Domain(record.at("domain").get<std::string>())
                                 : domain;
        } catch (const nlohmann::json::exception& e) {
            throw DataError(path + ":" + std::to_string(line_no) + ": bad corpus field type: " + e.what());
        }
        try {
            corpus.add(std::move(passage));
        } catch (const DataError& e) {
            throw DataError(path + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
    return corpus;
}

void write_corpus(const Corpus& corpus, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw DataError("cannot write corpus file '" + path + "'");
    }
    for (const Passage& passage : corpus.passages()) {
        nlohmann::json record{{"id", passage.id},
                              {"doc_id", passage.doc_id},
                              {"text", passage.text},
                              {"domain", passage.domain.name()}};
        out << record.dump() << '\n';
    }
}

std::vector<Passage> chunk_document(const std::string& doc_id, const std::string& text,
                                    std::size_t chunk_tokens, std::size_t overlap_tokens,
                                    const Domain& domain) {
    if (chunk_tokens == 0 || overlap_tokens >= chunk_tokens) {
        throw ConfigError("chunk overlap (" + std::to_string(overlap_tokens) +
                          ") must be smaller than chunk size (" + std::to_string(chunk_tokens) + ")");
    }

    std::vector<std::string> tokens;
    {
        std::istringstream stream(text);
        std::string token;
        while (stream >> token) {
            tokens.push_back(std::move(token));
        }
    }
    if (tokens.empty()) {
        throw DataError("cannot chunk document '" + doc_id + "': text has no tokens");
    }

    const std::size_t stride = chunk_tokens - overlap_tokens;
    std::vector<Passage> chunks;
    std::size_t start = 0;
    std::size_t ordinal = 0;
    while (true) {
        const std::size_t end = std::min(start + chunk_tokens, tokens.size());
        std::string chunk_text;
        for (std::size_t i = start; i < end; ++i) {
            if (i > start) {
                chunk_text += ' ';
            }
            chunk_text += tokens[i];
        }
        chunks.push_back(Passage{doc_id + "-" + std::to_string(ordinal), doc_id,
                                 std::move(chunk_text), domain});
        ++ordinal;
        if (end == tokens.size()) {
            break;
        }
        start += stride;
    }
    return chunks;
}

}  // namespace convsearch
