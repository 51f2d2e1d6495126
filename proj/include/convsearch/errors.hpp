// Copyright 2026 The convsearch authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace convsearch {

// Error taxonomy. Kind maps one-to-one onto CLI exit codes:
// config -> 1, data -> 2, backend -> 3.
class Error : public std::runtime_error {
public:
    enum class Kind { config = 1, data = 2, backend = 3 };

    Error(Kind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    Kind kind() const noexcept { return kind_; }

private:
    Kind kind_;
};

// Bad configuration or API misuse (invalid parameter combinations).
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& message) : Error(Kind::config, message) {}
};

// Malformed or inconsistent input data (corpora, qrels, runs, snapshots).
class DataError : public Error {
public:
    explicit DataError(const std::string& message) : Error(Kind::data, message) {}
};

// Remote backend failures (embedding, generation, scoring endpoints).
class BackendError : public Error {
public:
    explicit BackendError(const std::string& message) : Error(Kind::backend, message) {}
};

}  // namespace convsearch
