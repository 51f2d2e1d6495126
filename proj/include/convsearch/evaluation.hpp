// Copyright 2026 The convsearch authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "convsearch/corpus.hpp"

namespace convsearch {

// Graded relevance judgments keyed by (query_id, passage_id). Queries with
// no positive grade are excluded from scoring entirely, mirroring the
// answerable-subset evaluation.
class Qrels {
public:
    void add(const std::string& query_id, const std::string& passage_id, int grade);

    const std::unordered_map<std::string, int>* judgments(const std::string& query_id) const;
    bool has_positive(const std::string& query_id) const;
    std::vector<std::string> query_ids_sorted() const;
    std::size_t judgment_count() const noexcept { return judgment_count_; }

private:
    std::map<std::string, std::unordered_map<std::string, int>> by_query_;
    std::size_t judgment_count_ = 0;
};

// TREC qrels format: "query_id 0 passage_id grade", whitespace-separated.
Qrels load_qrels(const std::string& path);
void write_qrels(const Qrels& qrels, const std::string& path);

// One row of a TREC run file: "query_id Q0 passage_id rank score tag".
struct RunEntry {
    std::string query_id;
    std::string passage_id;
    int rank = 0;   // 1-based
    double score = 0.0;
    std::string tag;
};

std::vector<RunEntry> load_run(const std::string& path);
void write_run(const std::vector<RunEntry>& run, const std::string& path);
std::string format_run(const std::vector<RunEntry>& run);

// nDCG@k with linear gain, matching the trec_eval "ndcg" measure:
//   DCG@k  = sum_{i=1..min(k,n)} grade(d_i) / log2(i + 1)
//   IDCG@k = DCG of the judged grades sorted descending
// Returns DCG/IDCG in [0, 1]; 0 when the query has no positive grade.
double ndcg_at_k(const std::vector<std::string>& ranking,
                 const std::unordered_map<std::string, int>& grades, std::size_t k);

// |relevant in top-k| / |relevant| with relevant meaning grade > 0.
double recall_at_k(const std::vector<std::string>& ranking,
                   const std::unordered_map<std::string, int>& grades, std::size_t k);

struct QueryMetrics {
    double ndcg5 = 0.0;
    double ndcg10 = 0.0;
    double recall10 = 0.0;
};

struct MetricAggregate {
    std::size_t query_count = 0;
    double ndcg5 = 0.0;
    double ndcg10 = 0.0;
    double recall10 = 0.0;
};

struct MetricReport {
    std::map<std::string, QueryMetrics> per_query;   // sorted by query_id
    std::map<Domain, MetricAggregate> per_domain;
    MetricAggregate overall;                         // unweighted mean over scored queries
};

// Scores every query with at least one positive judgment. Judged queries
// missing from the run score 0 on all metrics; run queries absent from the
// qrels are ignored. Throws DataError naming the query_id if the run
// violates the RunEntry invariants (consecutive 1..n ranks, non-increasing
// scores, unique passage ids).
MetricReport evaluate_run(const std::vector<RunEntry>& run, const Qrels& qrels,
                          const std::map<std::string, Domain>& domains);

// Aligned text table with one row per domain plus an overall row.
std::string render_report_table(const MetricReport& report);
std::string render_report_csv(const MetricReport& report);

}  // namespace convsearch
