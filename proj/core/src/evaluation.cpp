// Copyright 2026 The Rhetrank Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "rhetrank/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <boost/math/distributions/students_t.hpp>
#include <boost/math/special_functions/beta.hpp>

#include "detail/text.hpp"
#include "rhetrank/parallel.hpp"
#include "rhetrank/random.hpp"

namespace rhetrank {
namespace {

std::size_t count_relevant(const QueryJudgments& judged) {
  return static_cast<std::size_t>(std::count_if(
      judged.begin(), judged.end(), [](const auto& kv) { return kv.second >= 1; }));
}

const int* grade_of(const QueryJudgments& judged, const std::string& doc_id) {
  auto it = judged.find(doc_id);
  return it == judged.end() ? nullptr : &it->second;
}

// Candidates per query from first-stage retrieval at one mu.
std::vector<std::vector<const Document*>> first_stage(std::span<const Query> queries,
                                                      const Collection& collection,
                                                      const CollectionStats& stats,
                                                      double mu, std::size_t depth) {
  std::vector<std::vector<const Document*>> candidates(queries.size());
  for (std::size_t q = 0; q < queries.size(); ++q) {
    for (const ScoredDoc& s : retrieve(queries[q], collection, stats, mu, depth)) {
      candidates[q].push_back(collection.find(s.doc_id));
    }
  }
  return candidates;
}

std::map<std::string, double> score_queries(
    std::span<const Query> queries,
    const std::vector<std::vector<const Document*>>& candidates,
    const CollectionStats& stats, const Judgments& judgments, const RerankConfig& config,
    Metric metric) {
  std::map<std::string, double> per_query;
  for (std::size_t q = 0; q < queries.size(); ++q) {
    auto judged = judgments.find(queries[q].id);
    if (judged == judgments.end()) continue;
    std::vector<std::string> ranking;
    for (const ScoredDoc& s : rerank(queries[q], candidates[q], stats, config)) {
      ranking.push_back(s.doc_id);
    }
    if (auto value = evaluate_query(metric, ranking, judged->second)) {
      per_query[queries[q].id] = *value;
    }
  }
  return per_query;
}

double mean_over(const std::map<std::string, double>& values,
                 std::span<const std::string> ids) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const std::string& id : ids) {
    auto it = values.find(id);
    if (it == values.end()) continue;
    sum += it->second;
    ++n;
  }
  return n == 0 ? 0.0 : sum / static_cast<double>(n);
}

}  // namespace

std::string_view to_string(Metric metric) noexcept {
  switch (metric) {
    case Metric::kMap:
      return "map";
    case Metric::kBpref:
      return "bpref";
    case Metric::kNdcg:
      return "ndcg";
  }
  return "unknown";
}

std::optional<Metric> parse_metric(std::string_view name) noexcept {
  if (name == "map") return Metric::kMap;
  if (name == "bpref") return Metric::kBpref;
  if (name == "ndcg") return Metric::kNdcg;
  return std::nullopt;
}

std::optional<double> average_precision(std::span<const std::string> ranking,
                                        const QueryJudgments& judged) {
  const std::size_t relevant = count_relevant(judged);
  if (relevant == 0) return std::nullopt;
  double sum = 0.0;
  std::size_t hits = 0;
  for (std::size_t i = 0; i < ranking.size(); ++i) {
    const int* grade = grade_of(judged, ranking[i]);
    if (grade == nullptr || *grade < 1) continue;
    ++hits;
    sum += static_cast<double>(hits) / static_cast<double>(i + 1);
  }
  return sum / static_cast<double>(relevant);
}

std::optional<double> bpref(std::span<const std::string> ranking,
                            const QueryJudgments& judged) {
  const std::size_t relevant = count_relevant(judged);
  if (relevant == 0) return std::nullopt;
  const std::size_t nonrelevant = judged.size() - relevant;
  const double denominator = static_cast<double>(std::min(relevant, nonrelevant));
  std::size_t nonrelevant_above = 0;
  double sum = 0.0;
  for (const std::string& doc_id : ranking) {
    const int* grade = grade_of(judged, doc_id);
    if (grade == nullptr) continue;
    if (*grade >= 1) {
      sum += nonrelevant == 0
                 ? 1.0
                 : 1.0 - static_cast<double>(std::min(nonrelevant_above, relevant)) /
                             denominator;
    } else {
      ++nonrelevant_above;
    }
  }
  return sum / static_cast<double>(relevant);
}

std::optional<double> ndcg(std::span<const std::string> ranking,
                           const QueryJudgments& judged, std::size_t cutoff) {
  if (cutoff == 0) cutoff = ranking.size();
  auto gain = [](int grade) { return std::exp2(static_cast<double>(grade)) - 1.0; };
  auto discount = [](std::size_t i) { return std::log2(static_cast<double>(i) + 2.0); };

  double dcg = 0.0;
  for (std::size_t i = 0; i < std::min(cutoff, ranking.size()); ++i) {
    const int* grade = grade_of(judged, ranking[i]);
    if (grade != nullptr) dcg += gain(*grade) / discount(i);
  }
  std::vector<int> ideal;
  for (const auto& [doc, grade] : judged) ideal.push_back(grade);
  std::sort(ideal.begin(), ideal.end(), std::greater<>());
  double idcg = 0.0;
  for (std::size_t i = 0; i < std::min(cutoff, ideal.size()); ++i) {
    idcg += gain(ideal[i]) / discount(i);
  }
  if (idcg == 0.0) return std::nullopt;
  return dcg / idcg;
}

std::optional<double> evaluate_query(Metric metric, std::span<const std::string> ranking,
                                     const QueryJudgments& judged) {
  switch (metric) {
    case Metric::kMap:
      return average_precision(ranking, judged);
    case Metric::kBpref:
      return bpref(ranking, judged);
    case Metric::kNdcg:
      return ndcg(ranking, judged);
  }
  return std::nullopt;
}

MetricReport evaluate(const Run& run, const Judgments& judgments, Metric metric) {
  MetricReport report;
  report.metric = metric;
  for (const auto& [qid, entries] : group_by_query(run)) {
    auto judged = judgments.find(qid);
    if (judged == judgments.end()) continue;
    std::vector<std::string> ranking;
    ranking.reserve(entries.size());
    for (const RunEntry& e : entries) ranking.push_back(e.doc_id);
    if (auto value = evaluate_query(metric, ranking, judged->second)) {
      report.per_query[qid] = *value;
    } else {
      report.skipped.push_back(qid);
    }
  }
  double sum = 0.0;
  for (const auto& [qid, value] : report.per_query) sum += value;
  if (!report.per_query.empty()) {
    report.mean = sum / static_cast<double>(report.per_query.size());
  }
  return report;
}

std::string write_detail(const MetricReport& report) {
  std::string out;
  for (const auto& [qid, value] : report.per_query) {
    out += to_string(report.metric);
    out += '\t';
    out += qid;
    out += '\t';
    out += detail::format_fixed(value, 6);
    out += '\n';
  }
  return out;
}

TTestResult paired_ttest(const std::map<std::string, double>& a,
                         const std::map<std::string, double>& b) {
  std::vector<double> diffs;
  for (const auto& [qid, value] : a) {
    auto it = b.find(qid);
    if (it != b.end()) diffs.push_back(value - it->second);
  }
  TTestResult result;
  result.n = diffs.size();
  if (diffs.size() < 2) {
    result.degenerate = true;
    return result;
  }
  const double n = static_cast<double>(diffs.size());
  double sum = 0.0;
  for (double d : diffs) sum += d;
  const double mean = sum / n;
  double squares = 0.0;
  for (double d : diffs) squares += (d - mean) * (d - mean);
  const double variance = squares / (n - 1.0);
  if (!(variance > 0.0)) {
    result.degenerate = true;
    return result;
  }
  result.t = mean / std::sqrt(variance / n);
  const double df = n - 1.0;
  result.p_value = boost::math::ibeta(0.5 * df, 0.5, df / (df + result.t * result.t));
  result.significant_95 = result.p_value < 0.05;
  result.significant_99 = result.p_value < 0.01;
  return result;
}

double t_critical(double df, double confidence) {
  boost::math::students_t dist(df);
  return boost::math::quantile(boost::math::complement(dist, 0.5 * (1.0 - confidence)));
}

std::vector<QueryDiff> per_query_diff(const std::map<std::string, double>& a,
                                      const std::map<std::string, double>& b) {
  std::vector<QueryDiff> diffs;
  for (const auto& [qid, value] : a) {
    auto it = b.find(qid);
    if (it != b.end()) diffs.push_back({qid, value - it->second});
  }
  std::sort(diffs.begin(), diffs.end(), [](const QueryDiff& x, const QueryDiff& y) {
    if (x.diff != y.diff) return x.diff < y.diff;
    return x.query_id < y.query_id;
  });
  return diffs;
}

std::string write_diff(std::span<const QueryDiff> diffs) {
  std::string out;
  for (std::size_t i = 0; i < diffs.size(); ++i) {
    out += std::to_string(i + 1);
    out += '\t';
    out += detail::format_fixed(diffs[i].diff, 6);
    out += '\t';
    out += diffs[i].query_id;
    out += '\n';
  }
  return out;
}

std::string write_summary(std::span<const SummaryRow> rows,
                          std::span<const MetricReport> baselines) {
  std::string out = "run\tmetric\tvalue\tchange\tsignificance\n";
  for (const MetricReport& b : baselines) {
    out += "baseline\t" + std::string(to_string(b.metric)) + '\t' +
           detail::format_fixed(b.mean, 4) + "\t\t\n";
  }
  for (const SummaryRow& row : rows) {
    const MetricReport& report = row.report;
    out += row.run + '\t' + std::string(to_string(report.metric)) + '\t' +
           detail::format_fixed(report.mean, 4) + '\t';
    auto baseline = std::find_if(baselines.begin(), baselines.end(),
                                 [&](const MetricReport& b) { return b.metric == report.metric; });
    if (baseline != baselines.end()) {
      if (baseline->mean > 0) {
        const double change = 100.0 * (report.mean - baseline->mean) / baseline->mean;
        out += (change >= 0 ? "+" : "") + detail::format_fixed(change, 2) + "%";
      }
      out += '\t';
      const TTestResult t = paired_ttest(report.per_query, baseline->per_query);
      out += t.significant_99 ? "**" : t.significant_95 ? "*" : "";
    } else {
      out += '\t';
    }
    out += '\n';
  }
  return out;
}

std::vector<std::vector<std::string>> assign_folds(std::vector<std::string> query_ids,
                                                   std::size_t folds, std::uint64_t seed) {
  if (folds == 0) throw std::invalid_argument("fold count must be positive");
  std::sort(query_ids.begin(), query_ids.end());
  SeededRng rng(seed);
  rng.shuffle(query_ids);
  std::vector<std::vector<std::string>> assignment(folds);
  for (std::size_t i = 0; i < query_ids.size(); ++i) {
    assignment[i % folds].push_back(std::move(query_ids[i]));
  }
  return assignment;
}

std::map<std::string, double> evaluate_setting(std::span<const Query> queries,
                                               const Collection& collection,
                                               const CollectionStats& stats,
                                               const Judgments& judgments, double mu,
                                               double kappa, const CvSetup& setup) {
  RerankConfig config = setup.rerank;
  config.mu = mu;
  config.kappa = kappa;
  config.validate();
  return score_queries(queries, first_stage(queries, collection, stats, mu, setup.depth),
                       stats, judgments, config, setup.metric);
}

CvResult cross_validate(std::span<const Query> queries, const Collection& collection,
                        const CollectionStats& stats, const Judgments& judgments,
                        const CvGrid& grid, const CvSetup& setup) {
  if (grid.mu_grid.empty() || grid.kappa_grid.empty()) {
    throw std::invalid_argument("empty tuning grid");
  }
  std::vector<double> mus = grid.mu_grid;
  std::vector<double> kappas = grid.kappa_grid;
  std::sort(mus.begin(), mus.end());
  std::sort(kappas.begin(), kappas.end());
  for (double mu : mus) {
    RerankConfig probe = setup.rerank;
    probe.mu = mu;
    probe.kappa = kappas.front();
    probe.validate();
  }
  if (!(kappas.front() >= 0.0 && kappas.back() <= 1.0)) {
    throw std::invalid_argument("kappa grid must lie in [0, 1]");
  }

  // Metric matrix indexed [mu][kappa] -> per-query values.
  std::vector<std::vector<std::map<std::string, double>>> table(
      mus.size(), std::vector<std::map<std::string, double>>(kappas.size()));
  parallel_for(mus.size(), [&](std::size_t m) {
    const auto candidates = first_stage(queries, collection, stats, mus[m], setup.depth);
    for (std::size_t k = 0; k < kappas.size(); ++k) {
      RerankConfig config = setup.rerank;
      config.mu = mus[m];
      config.kappa = kappas[k];
      table[m][k] =
          score_queries(queries, candidates, stats, judgments, config, setup.metric);
    }
  });

  std::vector<std::string> evaluable;
  for (const auto& [qid, value] : table[0][0]) evaluable.push_back(qid);
  if (evaluable.size() < grid.folds) {
    throw std::invalid_argument("cross-validation needs at least " +
                                std::to_string(grid.folds) +
                                " queries with relevant documents, found " +
                                std::to_string(evaluable.size()));
  }
  const auto fold_queries = assign_folds(evaluable, grid.folds, setup.seed);

  CvResult result;
  double total = 0.0;
  for (std::size_t f = 0; f < grid.folds; ++f) {
    std::vector<std::string> train;
    for (std::size_t g = 0; g < grid.folds; ++g) {
      if (g != f) train.insert(train.end(), fold_queries[g].begin(), fold_queries[g].end());
    }
    CvFold fold;
    fold.test_queries = fold_queries[f];
    std::size_t best_m = 0;
    std::size_t best_k = 0;
    double best = -1.0;
    for (std::size_t m = 0; m < mus.size(); ++m) {
      for (std::size_t k = 0; k < kappas.size(); ++k) {
        const double score = mean_over(table[m][k], train);
        if (score > best) {
          best = score;
          best_m = m;
          best_k = k;
        }
      }
    }
    fold.mu = mus[best_m];
    fold.kappa = kappas[best_k];
    fold.train_score = best;
    fold.test_score = mean_over(table[best_m][best_k], fold.test_queries);
    for (const std::string& qid : fold.test_queries) {
      auto it = table[best_m][best_k].find(qid);
      if (it != table[best_m][best_k].end()) result.test_per_query[qid] = it->second;
    }
    total += fold.test_score;
    result.folds.push_back(std::move(fold));
  }
  result.mean_test_score = total / static_cast<double>(grid.folds);
  return result;
}

std::string write_cv_report(const CvResult& result) {
  std::string out = "fold\tmu\tkappa\ttrain\ttest\tqueries\n";
  for (std::size_t f = 0; f < result.folds.size(); ++f) {
    const CvFold& fold = result.folds[f];
    out += std::to_string(f + 1) + '\t' + detail::format_exact(fold.mu) + '\t' +
           detail::format_exact(fold.kappa) + '\t' + detail::format_fixed(fold.train_score, 6) +
           '\t' + detail::format_fixed(fold.test_score, 6) + '\t';
    for (std::size_t i = 0; i < fold.test_queries.size(); ++i) {
      if (i) out += ',';
      out += fold.test_queries[i];
    }
    out += '\n';
  }
  out += "mean\t\t\t\t" + detail::format_fixed(result.mean_test_score, 6) + "\t\n";
  return out;
}

}  // namespace rhetrank
