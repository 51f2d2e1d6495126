// Copyright 2026 The convsearch authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <map>
#include <mutex>
#include <string>
#include <vector>

#include "convsearch/corpus.hpp"
#include "convsearch/fusion.hpp"
#include "convsearch/ranked_list.hpp"

namespace convsearch {

enum class Role { user, agent };

struct Turn {
    Role role = Role::user;
    std::string text;
};

// A retrieval query in context: the turns seen so far, ending with the
// user question to rewrite. query_id joins the final turn to the qrels.
struct Conversation {
    std::string id;
    std::string query_id;
    Domain domain;
    std::vector<Turn> turns;

    const std::string& question() const { return turns.back().text; }

    // Throws DataError unless every turn is non-empty and the last turn is
    // a user turn.
    void validate() const;
};

// Conversations JSONL: {"conversation_id", "domain", "query_id", "turns"}.
std::vector<Conversation> load_conversations(const std::string& path);
void write_conversations(const std::vector<Conversation>& conversations, const std::string& path);

enum class QueryStrategy { none, simple, domain_aware, multi_query };

std::string to_string(QueryStrategy strategy);
QueryStrategy parse_strategy(const std::string& name);

struct RewriteConfig {
    std::map<std::string, double> temperatures{
        {"clapnq", 0.2}, {"cloud", 0.0}, {"fiqa", 0.3}, {"govt", 0.3}};
    int history_window = 10;
    int max_prompt_tokens = 2048;
    bool skip_first_turn = true;
    QueryStrategy strategy = QueryStrategy::simple;
    int num_variants = 3;   // multi_query only
    int max_new_tokens = 128;
    // Fixed per-domain sentences injected by the domain_aware strategy.
    std::map<std::string, std::string> domain_sentences{
        {"clapnq", "This is a general knowledge encyclopedia query"},
        {"cloud", "This is a technical cloud computing query"},
        {"fiqa", "This is a personal finance forum query"},
        {"govt", "This is a government policy query"}};

    double temperature_for(const Domain& domain) const;
    const std::string* domain_sentence_for(const Domain& domain) const;
};

// Text generation backend. At temperature 0 implementations must be
// deterministic: same prompt, same output.
class GenerationClient {
public:
    virtual ~GenerationClient() = default;
    virtual std::string generate(const std::string& prompt, double temperature,
                                 int max_new_tokens) = 0;
};

struct GenerationCall {
    std::string prompt;
    double temperature = 0.0;
    int max_new_tokens = 0;
};

// Deterministic model-free backend for tests and offline runs. At
// temperature 0 it returns the question with each pronoun in {it, they,
// this, that} replaced by the most recent capitalized token found in the
// history; at temperature t > 0 it additionally appends the ceil(4t)
// most-recent distinct history content words, so temperature observably
// changes the output. Records every call for instrumentation.
class StubGenerationClient : public GenerationClient {
public:
    std::string generate(const std::string& prompt, double temperature,
                         int max_new_tokens) override;

    std::size_t call_count() const;
    std::vector<GenerationCall> calls() const;
    void reset();

private:
    mutable std::mutex mutex_;
    std::vector<GenerationCall> calls_;
};

// Identity backend: returns the question unchanged. Useful for checking
// that the pipeline is a no-op under a trivial rewriter.
class EchoGenerationClient : public GenerationClient {
public:
    std::string generate(const std::string& prompt, double temperature,
                         int max_new_tokens) override;

    std::size_t call_count() const;

private:
    mutable std::mutex mutex_;
    std::size_t calls_ = 0;
};

// The fixed system prompt placed verbatim at the top of every rewrite
// prompt.
const std::string& rewrite_system_prompt();

// Assembles the full prompt: system section, then the last history_window
// turns as "ROLE: text" lines, then "QUESTION: <question>". domain_aware
// prepends the domain sentence to the user section. If the whitespace
// token count exceeds max_prompt_tokens the oldest history turns are
// dropped first; a question that alone exceeds the budget is an error.
std::string build_prompt(const Conversation& conversation, const RewriteConfig& config);

// Prompt for variant `variant_index` (1-based) of `variant_count`: the
// base prompt plus a trailing "Variant i of n" line when variant_count > 1.
std::string build_variant_prompt(const Conversation& conversation, const RewriteConfig& config,
                                 int variant_index, int variant_count);

// Produces the standalone query (or queries) for a conversation. Single
// turn conversations with skip_first_turn return the question with zero
// client calls; multi_query issues one call per variant; blank generations
// fall back to the raw question.
std::vector<std::string> rewrite_query(const Conversation& conversation,
                                       const RewriteConfig& config, GenerationClient& client);

// Runs the per-query hybrid retrieval for every query variant and fuses
// all resulting lists with RRF. With one query this is exactly the plain
// hybrid path.
using HybridRetriever = std::function<std::vector<RankedList>(const std::string& query)>;
RankedList retrieve_multi(const std::vector<std::string>& queries, const HybridRetriever& retriever,
                          const RrfConfig& fusion = {});

}  // namespace convsearch
