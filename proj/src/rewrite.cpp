// Copyright 2026 The convsearch authors
// SPDX-License-Identifier: Apache-2.0

#include "convsearch/rewrite.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <regex>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

#include "convsearch/errors.hpp"
#include "convsearch/tokenizer.hpp"

namespace convsearch {

namespace {

constexpr const char* kQuestionPrefix = "QUESTION: ";
constexpr const char* kUserPrefix = "USER: ";
constexpr const char* kAgentPrefix = "AGENT: ";

std::size_t whitespace_token_count(const std::string& text) {
    std::istringstream stream(text);
    std::string token;
    std::size_t count = 0;
    while (stream >> token) {
        ++count;
    }
    return count;
}

std::string trim(const std::string& text) {
    std::size_t begin = 0;
    std::size_t end = text.size();
    while (begin < end && std::isspace(static_cast<unsigned char>(text[begin]))) {
        ++begin;
    }
    while (end > begin && std::isspace(static_cast<unsigned char>(text[end - 1]))) {
        --end;
    }
    return text.substr(begin, end - begin);
}

const char* role_prefix(Role role) {
    return role == Role::user ? kUserPrefix : kAgentPrefix;
}

std::string assemble_prompt(const Conversation& conversation, const RewriteConfig& config,
                            std::size_t history_turns) {
    std::string prompt = rewrite_system_prompt();
    prompt += "\n\n";
    if (config.strategy == QueryStrategy::domain_aware) {
        if (const std::string* sentence = config.domain_sentence_for(conversation.domain)) {
            prompt += *sentence;
            prompt += '\n';
        }
    }
    const std::size_t total_history = conversation.turns.size() - 1;
    for (std::size_t i = total_history - history_turns; i < total_history; ++i) {
        prompt += role_prefix(conversation.turns[i].role);
        prompt += conversation.turns[i].text;
        prompt += '\n';
    }
    prompt += kQuestionPrefix;
    prompt += conversation.question();
    return prompt;
}

// The stub backends recover history and question from the pinned prompt
// layout built by build_prompt.
struct ParsedPrompt {
    std::vector<std::string> history;   // turn texts, oldest first
    std::string question;
};

ParsedPrompt parse_prompt(const std::string& prompt) {
    ParsedPrompt parsed;
    std::istringstream stream(prompt);
    std::string line;
    while (std::getline(stream, line)) {
        if (line.rfind(kUserPrefix, 0) == 0) {
            parsed.history.push_back(line.substr(std::string(kUserPrefix).size()));
        } else if (line.rfind(kAgentPrefix, 0) == 0) {
            parsed.history.push_back(line.substr(std::string(kAgentPrefix).size()));
        } else if (line.rfind(kQuestionPrefix, 0) == 0) {
            parsed.question = line.substr(std::string(kQuestionPrefix).size());
        }
    }
    return parsed;
}

}  // namespace

void Conversation::validate() const {
    if (turns.empty()) {
        throw DataError("conversation '" + id + "' has no turns");
    }
    if (turns.back().role != Role::user) {
        throw DataError("conversation '" + id + "' must end with a user turn");
    }
    for (const Turn& turn : turns) {
        if (trim(turn.text).empty()) {
            throw DataError("conversation '" + id + "' contains an empty turn");
        }
    }
}

std::vector<Conversation> load_conversations(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw DataError("cannot open conversations file '" + path + "'");
    }
    std::vector<Conversation> conversations;
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
        try {
            nlohmann::json record = nlohmann::json::parse(line);
            Conversation conversation;
            conversation.id = record.at("conversation_id").get<std::string>();
            conversation.query_id = record.at("query_id").get<std::string>();
            conversation.domain = Domain(record.at("domain").get<std::string>());
            for (const auto& turn_json : record.at("turns")) {
                Turn turn;
                const auto role = turn_json.at("role").get<std::string>();
                if (role == "user") {
                    turn.role = Role::user;
                } else if (role == "agent") {
                    turn.role = Role::agent;
                } else {
                    throw DataError("unknown role '" + role + "'");
                }
                turn.text = turn_json.at("text").get<std::string>();
                conversation.turns.push_back(std::move(turn));
            }
            conversation.validate();
            conversations.push_back(std::move(conversation));
        } catch (const nlohmann::json::exception& e) {
            throw DataError(path + ":" + std::to_string(line_no) +
                            ": malformed conversation record: " + e.what());
        } catch (const DataError& e) {
            throw DataError(path + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
    return conversations;
}

void write_conversations(const std::vector<Conversation>& conversations, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw DataError("cannot write conversations file '" + path + "'");
    }
    for (const Conversation& conversation : conversations) {
        nlohmann::json turns = nlohmann::json::array();
        for (const Turn& turn : conversation.turns) {
            turns.push_back({{"role", turn.role == Role::user ? "user" : "agent"},
                             {"text", turn.text}});
        }
        nlohmann::json record{{"conversation_id", conversation.id},
                              {"query_id", conversation.query_id},
                              {"domain", conversation.domain.name()},
                              {"turns", turns}};
        out << record.dump() << '\n';
    }
}

std::string to_string(QueryStrategy strategy) {
    switch (strategy) {
        case QueryStrategy::none: return "none";
        case QueryStrategy::simple: return "simple";
        case QueryStrategy::domain_aware: return "domain_aware";
        case QueryStrategy::multi_query: return "multi_query";
    }
    return "simple";
}

QueryStrategy parse_strategy(const std::string& name) {
    if (name == "none") return QueryStrategy::none;
    if (name == "simple") return QueryStrategy::simple;
    if (name == "domain_aware") return QueryStrategy::domain_aware;
    if (name == "multi_query") return QueryStrategy::multi_query;
    throw ConfigError("unknown query strategy '" + name +
                      "' (expected none, simple, domain_aware or multi_query)");
}

double RewriteConfig::temperature_for(const Domain& domain) const {
    auto it = temperatures.find(domain.name());
    return it == temperatures.end() ? 0.0 : it->second;
}

const std::string* RewriteConfig::domain_sentence_for(const Domain& domain) const {
    auto it = domain_sentences.find(domain.name());
    return it == domain_sentences.end() ? nullptr : &it->second;
}

const std::string& rewrite_system_prompt() {
    static const std::string prompt =
        "You are a query rewriting assistant for information retrieval. Given a conversation "
        "history and a current question, rewrite the question to be completely standalone and "
        "self-contained.\n"
        "\n"
        "Rules:\n"
        "1. Resolve all pronouns (it, they, this, that) to their explicit referents\n"
        "2. Include relevant context from the conversation that's needed to understand the query\n"
        "3. Keep the rewritten query concise and search-friendly\n"
        "4. Do not add information not present in the conversation\n"
        "5. If the question is already standalone, return it unchanged";
    return prompt;
}

std::string build_prompt(const Conversation& conversation, const RewriteConfig& config) {
    conversation.validate();
    if (config.history_window < 1) {
        throw ConfigError("history_window must be at least 1");
    }
    const std::size_t available = conversation.turns.size() - 1;
    std::size_t history_turns = std::min(available, static_cast<std::size_t>(config.history_window));

    // Oldest turns go first when trimming to the token budget; the question
    // is always retained.
    const std::size_t budget = static_cast<std::size_t>(config.max_prompt_tokens);
    while (true) {
        std::string prompt = assemble_prompt(conversation, config, history_turns);
        if (whitespace_token_count(prompt) <= budget) {
            return prompt;
        }
        if (history_turns == 0) {
            throw DataError("conversation '" + conversation.id +
                            "': question alone exceeds max_prompt_tokens (" +
                            std::to_string(config.max_prompt_tokens) + ")");
        }
        --history_turns;
    }
}

std::string build_variant_prompt(const Conversation& conversation, const RewriteConfig& config,
                                 int variant_index, int variant_count) {
    std::string prompt = build_prompt(conversation, config);
    if (variant_count > 1) {
        prompt += "\nVariant " + std::to_string(variant_index) + " of " +
                  std::to_string(variant_count);
    }
    return prompt;
}

std::vector<std::string> rewrite_query(const Conversation& conversation,
                                       const RewriteConfig& config, GenerationClient& client) {
    conversation.validate();
    const std::string& question = conversation.question();

    // First-turn questions are already standalone; skip the backend.
    if (conversation.turns.size() == 1 && config.skip_first_turn) {
        return {question};
    }
    if (config.strategy == QueryStrategy::none) {
        return {question};
    }

    const double temperature = config.temperature_for(conversation.domain);
    const int variants = config.strategy == QueryStrategy::multi_query ? config.num_variants : 1;
    if (variants < 1) {
        throw ConfigError("num_variants must be at least 1");
    }

    std::vector<std::string> queries;
    queries.reserve(static_cast<std::size_t>(variants));
    for (int i = 1; i <= variants; ++i) {
        const std::string prompt =
            config.strategy == QueryStrategy::multi_query
                ? build_variant_prompt(conversation, config, i, variants)
                : build_prompt(conversation, config);
        std::string generated;
        try {
            generated = client.generate(prompt, temperature, config.max_new_tokens);
        } catch (const BackendError& e) {
            throw BackendError("conversation '" + conversation.id + "': " + e.what());
        }
        generated = trim(generated);
        queries.push_back(generated.empty() ? question : std::move(generated));
    }
    return queries;
}

RankedList retrieve_multi(const std::vector<std::string>& queries, const HybridRetriever& retriever,
                          const RrfConfig& fusion) {
    if (queries.empty()) {
        throw ConfigError("retrieve_multi needs at least one query");
    }
    std::vector<RankedList> lists;
    for (const std::string& query : queries) {
        std::vector<RankedList> per_query = retriever(query);
        for (auto& list : per_query) {
            lists.push_back(std::move(list));
        }
    }
    return rrf_fuse(lists, fusion);
}

std::string StubGenerationClient::generate(const std::string& prompt, double temperature,
                                           int max_new_tokens) {
    {
        std::lock_guard<std::mutex> lock(mutex_);
        calls_.push_back(GenerationCall{prompt, temperature, max_new_tokens});
    }
    const ParsedPrompt parsed = parse_prompt(prompt);

    // Resolve pronouns against the most recent capitalized history token.
    std::string referent;
    static const std::regex capitalized("[A-Z][a-z]+");
    for (const std::string& text : parsed.history) {
        for (std::sregex_iterator it(text.begin(), text.end(), capitalized), end; it != end; ++it) {
            referent = it->str();
        }
    }
    std::string rewritten = parsed.question;
    if (!referent.empty()) {
        static const std::regex pronouns("\\b(it|they|this|that)\\b", std::regex::icase);
        rewritten = std::regex_replace(rewritten, pronouns, referent);
    }

    if (temperature > 0.0) {
        // Append the ceil(4t) most recent distinct content words (length >= 4)
        // from the history, newest first.
        const std::size_t want = static_cast<std::size_t>(std::ceil(4.0 * temperature));
        std::vector<std::string> recent;
        std::unordered_set<std::string> seen;
        for (auto turn = parsed.history.rbegin(); turn != parsed.history.rend(); ++turn) {
            const std::vector<std::string> tokens = Tokenizer::split(*turn);
            for (auto tok = tokens.rbegin(); tok != tokens.rend(); ++tok) {
                if (tok->size() >= 4 && seen.insert(*tok).second) {
                    recent.push_back(*tok);
                    if (recent.size() == want) {
                        break;
                    }
                }
            }
            if (recent.size() == want) {
                break;
            }
        }
        for (const std::string& word : recent) {
            rewritten += ' ';
            rewritten += word;
        }
    }
    return rewritten;
}

std::size_t StubGenerationClient::call_count() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return calls_.size();
}

std::vector<GenerationCall> StubGenerationClient::calls() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return calls_;
}

void StubGenerationClient::reset() {
    std::lock_guard<std::mutex> lock(mutex_);
    calls_.clear();
}

std::string EchoGenerationClient::generate(const std::string& prompt, double temperature,
                                           int max_new_tokens) {
    (void)temperature;
    (void)max_new_tokens;
    {
        std::lock_guard<std::mutex> lock(mutex_);
        ++calls_;
    }
    return parse_prompt(prompt).question;
}

std::size_t EchoGenerationClient::call_count() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return calls_;
}

}  // namespace convsearch
