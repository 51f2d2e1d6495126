// Copyright 2026 The convsearch authors
// SPDX-License-Identifier: Apache-2.0

#include "convsearch/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <unordered_set>

#include "convsearch/errors.hpp"

namespace convsearch {

namespace {

double log2_rank(std::size_t one_based_rank) {
    return std::log2(static_cast<double>(one_based_rank) + 1.0);
}

std::string format_score(double score) {
    std::ostringstream out;
    out << std::fixed << std::setprecision(6) << score;
    return out.str();
}

std::string format_metric(double value) {
    std::ostringstream out;
    out << std::fixed << std::setprecision(4) << value;
    return out.str();
}

}  // namespace

void Qrels::add(const std::string& query_id, const std::string& passage_id, int grade) {
    if (grade < 0) {
        throw DataError("negative relevance grade for query '" + query_id + "', passage '" +
                        passage_id + "'");
    }
    auto& judged = by_query_[query_id];
    if (judged.emplace(passage_id, grade).second) {
        ++judgment_count_;
    } else {
        judged[passage_id] = grade;   // last judgment wins
    }
}

const std::unordered_map<std::string, int>* Qrels::judgments(const std::string& query_id) const {
    auto it = by_query_.find(query_id);
    return it == by_query_.end() ? nullptr : &it->second;
}

bool Qrels::has_positive(const std::string& query_id) const {
    const auto* judged = judgments(query_id);
    if (judged == nullptr) {
        return false;
    }
    for (const auto& [passage_id, grade] : *judged) {
        if (grade > 0) {
            return true;
        }
    }
    return false;
}

std::vector<std::string> Qrels::query_ids_sorted() const {
    std::vector<std::string> ids;
    ids.reserve(by_query_.size());
    for (const auto& [query_id, judged] : by_query_) {
        ids.push_back(query_id);
    }
    return ids;
}

Qrels load_qrels(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw DataError("cannot open qrels file '" + path + "'");
    }
    Qrels qrels;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        std::istringstream fields(line);
        std::string query_id, iteration, passage_id;
        long grade = 0;
        if (!(fields >> query_id)) {
            continue;   // blank line
        }
        if (!(fields >> iteration >> passage_id >> grade)) {
            throw DataError(path + ":" + std::to_string(line_no) +
                            ": qrels line needs 'query_id 0 passage_id grade'");
        }
        if (grade < 0) {
            throw DataError(path + ":" + std::to_string(line_no) + ": negative grade");
        }
        qrels.add(query_id, passage_id, static_cast<int>(grade));
    }
    return qrels;
}

void write_qrels(const Qrels& qrels, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw DataError("cannot write qrels file '" + path + "'");
    }
    for (const auto& query_id : qrels.query_ids_sorted()) {
        const auto* judged = qrels.judgments(query_id);
        std::vector<std::string> passage_ids;
        passage_ids.reserve(judged->size());
        for (const auto& [passage_id, grade] : *judged) {
            passage_ids.push_back(passage_id);
        }
        std::sort(passage_ids.begin(), passage_ids.end());
        for (const auto& passage_id : passage_ids) {
            out << query_id << " 0 " << passage_id << ' ' << judged->at(passage_id) << '\n';
        }
    }
}

std::vector<RunEntry> load_run(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw DataError("cannot open run file '" + path + "'");
    }
    std::vector<RunEntry> run;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        std::istringstream fields(line);
        RunEntry entry;
        std::string q0;
        if (!(fields >> entry.query_id)) {
            continue;
        }
        if (!(fields >> q0 >> entry.passage_id >> entry.rank >> entry.score >> entry.tag)) {
            throw DataError(path + ":" + std::to_string(line_no) +
                            ": run line needs 'query_id Q0 passage_id rank score tag'");
        }
        run.push_back(std::move(entry));
    }
    return run;
}

std::string format_run(const std::vector<RunEntry>& run) {
    std::ostringstream out;
    for (const RunEntry& entry : run) {
        out << entry.query_id << " Q0 " << entry.passage_id << ' ' << entry.rank << ' '
            << format_score(entry.score) << ' ' << entry.tag << '\n';
    }
    return out.str();
}

void write_run(const std::vector<RunEntry>& run, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw DataError("cannot write run file '" + path + "'");
    }
    out << format_run(run);
}

double ndcg_at_k(const std::vector<std::string>& ranking,
                 const std::unordered_map<std::string, int>& grades, std::size_t k) {
    const std::size_t depth = std::min(k, ranking.size());
    double dcg = 0.0;
    for (std::size_t i = 0; i < depth; ++i) {
        auto it = grades.find(ranking[i]);
        if (it != grades.end() && it->second > 0) {
            dcg += static_cast<double>(it->second) / log2_rank(i + 1);
        }
    }

    std::vector<int> ideal;
    ideal.reserve(grades.size());
    for (const auto& [passage_id, grade] : grades) {
        if (grade > 0) {
            ideal.push_back(grade);
        }
    }
    std::sort(ideal.begin(), ideal.end(), std::greater<int>());

    double idcg = 0.0;
    for (std::size_t i = 0; i < std::min(k, ideal.size()); ++i) {
        idcg += static_cast<double>(ideal[i]) / log2_rank(i + 1);
    }
    return idcg > 0.0 ? dcg / idcg : 0.0;
}

double recall_at_k(const std::vector<std::string>& ranking,
                   const std::unordered_map<std::string, int>& grades, std::size_t k) {
    std::size_t relevant = 0;
    for (const auto& [passage_id, grade] : grades) {
        if (grade > 0) {
            ++relevant;
        }
    }
    if (relevant == 0) {
        return 0.0;
    }
    std::size_t hits = 0;
    for (std::size_t i = 0; i < std::min(k, ranking.size()); ++i) {
        auto it = grades.find(ranking[i]);
        if (it != grades.end() && it->second > 0) {
            ++hits;
        }
    }
    return static_cast<double>(hits) / static_cast<double>(relevant);
}

MetricReport evaluate_run(const std::vector<RunEntry>& run, const Qrels& qrels,
                          const std::map<std::string, Domain>& domains) {
    // Group and validate the run per query.
    std::map<std::string, std::vector<const RunEntry*>> by_query;
    for (const RunEntry& entry : run) {
        by_query[entry.query_id].push_back(&entry);
    }

    std::map<std::string, std::vector<std::string>> rankings;
    for (auto& [query_id, entries] : by_query) {
        std::sort(entries.begin(), entries.end(),
                  [](const RunEntry* a, const RunEntry* b) { return a->rank < b->rank; });
        std::unordered_set<std::string_view> ids;
        std::vector<std::string> ranking;
        ranking.reserve(entries.size());
        for (std::size_t i = 0; i < entries.size(); ++i) {
            const RunEntry* entry = entries[i];
            if (entry->rank != static_cast<int>(i + 1)) {
                throw DataError("run validation failed for query '" + query_id +
                                "': ranks are not consecutive from 1");
            }
            if (i > 0 && entries[i - 1]->score < entry->score) {
                throw DataError("run validation failed for query '" + query_id +
                                "': scores increase at rank " + std::to_string(i + 1));
            }
            if (!ids.insert(entry->passage_id).second) {
                throw DataError("run validation failed for query '" + query_id +
                                "': duplicate passage id '" + entry->passage_id + "'");
            }
            ranking.push_back(entry->passage_id);
        }
        rankings.emplace(query_id, std::move(ranking));
    }

    MetricReport report;
    std::map<Domain, MetricAggregate> domain_totals;
    static const std::vector<std::string> kEmptyRanking;

    for (const std::string& query_id : qrels.query_ids_sorted()) {
        if (!qrels.has_positive(query_id)) {
            continue;   // unanswerable query: excluded, not scored as zero
        }
        const auto& grades = *qrels.judgments(query_id);
        auto ranking_it = rankings.find(query_id);
        const std::vector<std::string>& ranking =
            ranking_it == rankings.end() ? kEmptyRanking : ranking_it->second;

        QueryMetrics metrics;
        metrics.ndcg5 = ndcg_at_k(ranking, grades, 5);
        metrics.ndcg10 = ndcg_at_k(ranking, grades, 10);
        metrics.recall10 = recall_at_k(ranking, grades, 10);
        report.per_query.emplace(query_id, metrics);

        auto domain_it = domains.find(query_id);
        const Domain domain = domain_it == domains.end() ? Domain("unknown") : domain_it->second;
        MetricAggregate& agg = domain_totals[domain];
        agg.query_count += 1;
        agg.ndcg5 += metrics.ndcg5;
        agg.ndcg10 += metrics.ndcg10;
        agg.recall10 += metrics.recall10;

        report.overall.query_count += 1;
        report.overall.ndcg5 += metrics.ndcg5;
        report.overall.ndcg10 += metrics.ndcg10;
        report.overall.recall10 += metrics.recall10;
    }

    for (auto& [domain, agg] : domain_totals) {
        const double n = static_cast<double>(agg.query_count);
        report.per_domain[domain] = MetricAggregate{agg.query_count, agg.ndcg5 / n,
                                                    agg.ndcg10 / n, agg.recall10 / n};
    }
    if (report.overall.query_count > 0) {
        const double n = static_cast<double>(report.overall.query_count);
        report.overall.ndcg5 /= n;
        report.overall.ndcg10 /= n;
        report.overall.recall10 /= n;
    }
    return report;
}

std::string render_report_table(const MetricReport& report) {
    std::ostringstream out;
    out << std::left << std::setw(12) << "domain" << std::right << std::setw(9) << "queries"
        << std::setw(9) << "ndcg@5" << std::setw(9) << "ndcg@10" << std::setw(11) << "recall@10"
        << '\n';
    auto row = [&out](const std::string& label, const MetricAggregate& agg) {
        out << std::left << std::setw(12) << label << std::right << std::setw(9) << agg.query_count
            << std::setw(9) << format_metric(agg.ndcg5) << std::setw(9) << format_metric(agg.ndcg10)
            << std::setw(11) << format_metric(agg.recall10) << '\n';
    };
    for (const auto& [domain, agg] : report.per_domain) {
        row(domain.name(), agg);
    }
    row("overall", report.overall);
    return out.str();
}

std::string render_report_csv(const MetricReport& report) {
    std::ostringstream out;
    out << "domain,queries,ndcg@5,ndcg@10,recall@10\n";
    auto row = [&out](const std::string& label, const MetricAggregate& agg) {
        out << label << ',' << agg.query_count << ',' << format_metric(agg.ndcg5) << ','
            << format_metric(agg.ndcg10) << ',' << format_metric(agg.recall10) << '\n';
    };
    for (const auto& [domain, agg] : report.per_domain) {
        row(domain.name(), agg);
    }
    row("overall", report.overall);
    return out.str();
}

}  // namespace convsearch
