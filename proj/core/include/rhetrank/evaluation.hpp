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

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rhetrank/corpus.hpp"
#include "rhetrank/index.hpp"
#include "rhetrank/scoring.hpp"

namespace rhetrank {

enum class Metric : unsigned char { kMap, kBpref, kNdcg };

std::string_view to_string(Metric metric) noexcept;
std::optional<Metric> parse_metric(std::string_view name) noexcept;

using QueryJudgments = std::map<std::string, int>;

/// Unjudged documents count as non-relevant. nullopt when the query has no
/// relevant (grade >= 1) documents.
std::optional<double> average_precision(std::span<const std::string> ranking,
                                        const QueryJudgments& judged);

/// Buckley & Voorhees bpref: unjudged documents are ignored, and each relevant
/// document is penalized by the judged non-relevant documents above it
/// (at most R of them), divided by min(R, N).
std::optional<double> bpref(std::span<const std::string> ranking,
                            const QueryJudgments& judged);

/// Gain 2^g - 1, discount log2(rank + 1). cutoff 0 means the full ranking.
/// nullopt when the ideal DCG is zero.
std::optional<double> ndcg(std::span<const std::string> ranking,
                           const QueryJudgments& judged, std::size_t cutoff = 0);

std::optional<double> evaluate_query(Metric metric, std::span<const std::string> ranking,
                                     const QueryJudgments& judged);

struct MetricReport {
  Metric metric = Metric::kMap;
  std::map<std::string, double> per_query;
  double mean = 0.0;  // over per_query; 0 when nothing was evaluated
  std::vector<std::string> skipped;  // run queries without relevant documents
};

/// Evaluates every query of the run that has relevance judgments.
MetricReport evaluate(const Run& run, const Judgments& judgments, Metric metric);

/// `<metric><TAB><qid><TAB><value>` lines.
std::string write_detail(const MetricReport& report);

struct TTestResult {
  double t = 0.0;
  double p_value = 1.0;  // two-sided
  std::size_t n = 0;     // common queries
  bool degenerate = false;
  bool significant_95 = false;
  bool significant_99 = false;
};

/// Two-sided paired t-test on a - b over the common queries.
TTestResult paired_ttest(const std::map<std::string, double>& a,
                         const std::map<std::string, double>& b);

/// Two-sided critical value of Student's t with `df` degrees of freedom.
double t_critical(double df, double confidence);

struct QueryDiff {
  std::string query_id;
  double diff = 0.0;
};

/// a - b over the common queries, ascending (ties by query id).
std::vector<QueryDiff> per_query_diff(const std::map<std::string, double>& a,
                                      const std::map<std::string, double>& b);
/// `<index><TAB><diff><TAB><qid>` lines, index starting at 1.
std::string write_diff(std::span<const QueryDiff> diffs);

struct SummaryRow {
  std::string run;
  MetricReport report;
};

/// Table with one line per (run, metric): the value and, when a baseline
/// report for the same metric is supplied, the relative change and
/// significance stars (* at 95%, ** at 99%). Baselines are listed first.
std::string write_summary(std::span<const SummaryRow> rows,
                          std::span<const MetricReport> baselines = {});

struct CvGrid {
  std::vector<double> mu_grid{100, 500, 800, 1000, 2000, 3000, 4000, 5000, 8000, 10000};
  std::vector<double> kappa_grid{0.1, 0.3, 0.5, 0.7, 0.9};
  std::size_t folds = 5;
};

struct CvSetup {
  Metric metric = Metric::kMap;
  RerankConfig rerank;  // kappa and mu are overridden by the grid
  std::size_t depth = 1000;
  std::uint64_t seed = 0;
};

struct CvFold {
  std::vector<std::string> test_queries;
  double mu = 0.0;
  double kappa = 0.0;
  double train_score = 0.0;
  double test_score = 0.0;
};

struct CvResult {
  double mean_test_score = 0.0;  // mean of the per-fold test means
  std::vector<CvFold> folds;
  /// Every evaluable query scored at its own fold's chosen setting.
  std::map<std::string, double> test_per_query;
};

/// Tab-separated fold table followed by a `mean` line.
std::string write_cv_report(const CvResult& result);

/// Queries sorted by id, shuffled with `seed`, then dealt round-robin.
std::vector<std::vector<std::string>> assign_folds(std::vector<std::string> query_ids,
                                                   std::size_t folds, std::uint64_t seed);

/// Per-query metric for one (mu, kappa) setting: first-stage retrieval to
/// `setup.depth`, then reranking. Queries without relevant documents are left
/// out.
std::map<std::string, double> evaluate_setting(std::span<const Query> queries,
                                               const Collection& collection,
                                               const CollectionStats& stats,
                                               const Judgments& judgments, double mu,
                                               double kappa, const CvSetup& setup);

/// k-fold cross-validated grid search over (mu, kappa). Each fold's setting
/// maximizes the mean metric on the other folds, ties going to the smallest mu
/// and then the smallest kappa. Throws std::invalid_argument when fewer
/// evaluable queries than folds exist.
CvResult cross_validate(std::span<const Query> queries, const Collection& collection,
                        const CollectionStats& stats, const Judgments& judgments,
                        const CvGrid& grid, const CvSetup& setup);

}  // namespace rhetrank
