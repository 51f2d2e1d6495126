// Copyright 2026 The convsearch authors
// SPDX-License-Identifier: Apache-2.0

#include "convsearch/tokenizer.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "convsearch/errors.hpp"

namespace convsearch {

namespace {

bool is_token_char(unsigned char c) {
    return std::isalnum(c) != 0;
}

std::unordered_set<std::string> parse_stopword_lines(std::istream& in) {
    std::unordered_set<std::string> words;
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) {
            line.erase(hash);
        }
        std::istringstream fields(line);
        std::string word;
        while (fields >> word) {
            words.insert(word);
        }
    }
    return words;
}

}  // namespace

Tokenizer Tokenizer::with_default_stopwords() {
    return from_text(default_stopword_text());
}

Tokenizer Tokenizer::from_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw DataError("cannot open stopword file '" + path + "'");
    }
    return Tokenizer(parse_stopword_lines(in));
}

Tokenizer Tokenizer::from_text(const std::string& text) {
    std::istringstream in(text);
    return Tokenizer(parse_stopword_lines(in));
}

std::vector<std::string> Tokenizer::split(std::string_view text) {
    std::vector<std::string> tokens;
    std::string current;
    for (unsigned char c : text) {
        if (is_token_char(c)) {
            current += static_cast<char>(std::tolower(c));
        } else if (!current.empty()) {
            tokens.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) {
        tokens.push_back(std::move(current));
    }
    return tokens;
}

std::vector<std::string> Tokenizer::tokenize(std::string_view text) const {
    std::vector<std::string> tokens = split(text);
    if (stopwords_.empty()) {
        return tokens;
    }
    std::vector<std::string> kept;
    kept.reserve(tokens.size());
    for (auto& token : tokens) {
        if (!stopwords_.contains(token)) {
            kept.push_back(std::move(token));
        }
    }
    return kept;
}

}  // namespace convsearch
