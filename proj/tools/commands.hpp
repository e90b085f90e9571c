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

// Subcommands of the rhetrank tool. Each command reads its inputs, computes
// every output in memory and only then writes them, so a failing command
// leaves no output files behind.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace rhetrank::cli {

namespace fs = std::filesystem;

/// Writes files through temporaries renamed into place on commit().
class OutputSet {
 public:
  void add(fs::path path, std::string content);
  /// Creates parent directories, writes `<path>.tmp`, then renames.
  void commit();
  const std::vector<std::pair<fs::path, std::string>>& files() const { return files_; }

 private:
  std::vector<std::pair<fs::path, std::string>> files_;
};

struct CorpusInputs {
  fs::path corpus;
  std::optional<fs::path> annotations;
};

struct IndexOptions {
  CorpusInputs inputs;
  fs::path output;
};
void cmd_index(const IndexOptions& options);

struct RetrieveOptions {
  CorpusInputs inputs;
  fs::path stats;
  fs::path topics;
  double mu = 2000.0;
  std::size_t depth = 1000;
  std::string tag = "baseline";
  fs::path output;
};
void cmd_retrieve(const RetrieveOptions& options);

struct RerankOptions {
  CorpusInputs inputs;
  fs::path stats;
  fs::path topics;
  fs::path run;
  double mu = 2000.0;
  double kappa = 0.5;
  std::string relation;  // empty with all_relations
  bool all_relations = false;
  bool span_weight = false;
  std::string tag;
  fs::path output;
};
void cmd_rerank(const RerankOptions& options);

struct EvaluateOptions {
  fs::path run;
  fs::path qrels;
  std::vector<std::string> metrics{"map", "bpref", "ndcg"};
  std::optional<fs::path> baseline;
  fs::path output_dir;
  std::string name = "run";
};
void cmd_evaluate(const EvaluateOptions& options);

struct TuneOptions {
  CorpusInputs inputs;
  fs::path topics;
  fs::path qrels;
  std::string relation;
  bool all_relations = false;
  bool span_weight = false;
  std::string metric = "map";
  std::vector<double> mu_grid{100, 500, 800, 1000, 2000, 3000, 4000, 5000, 8000, 10000};
  std::vector<double> kappa_grid{0.1, 0.3, 0.5, 0.7, 0.9};
  std::size_t folds = 5;
  std::size_t depth = 1000;
  std::uint64_t seed = 0;
  fs::path output;
};
void cmd_tune(const TuneOptions& options);

struct ObserveOptions {
  CorpusInputs inputs;
  fs::path topics;
  fs::path qrels;
  double mu = 2000.0;
  double kappa = 0.5;
  bool span_weight = false;
  std::string metric = "map";
  std::size_t depth = 1000;
  fs::path output;
};
/// Per-query scores of single-relation reranking for every relation, written
/// as an observation file.
void cmd_observe(const ObserveOptions& options);

struct SelectOptions {
  std::vector<fs::path> observations;  // one file per query set
  std::uint64_t seed = 0;
  std::size_t repeats = 5;
  double alpha = 1.8;
  double nu = 0.1;
  double phi = 1.0;
  fs::path output_dir;
};
/// Writes selections.tsv, posterior_lambda.tsv and posterior_beta.tsv.
void cmd_select(const SelectOptions& options);

struct TagOptions {
  fs::path corpus;
  std::optional<fs::path> rules;
  fs::path output;
};
void cmd_tag(const TagOptions& options);

struct DistributionOptions {
  CorpusInputs inputs;
  fs::path output;
};
void cmd_distribution(const DistributionOptions& options);

struct GenerateOptions {
  std::size_t queries = 50;
  std::size_t background = 100;
  std::string relation = "contrast";
  std::string query_prefix = "q";
  std::uint64_t seed = 1;
  fs::path output_dir;
};
/// Writes documents.tsv, topics.tsv, qrels.txt and annotations.tsv.
void cmd_generate(const GenerateOptions& options);

struct PipelineOptions {
  CorpusInputs inputs;
  fs::path topics;
  fs::path qrels;
  double mu = 2000.0;
  double kappa = 0.5;
  std::string relation;
  bool all_relations = false;
  bool span_weight = false;
  std::size_t depth = 1000;
  fs::path output_dir;
};
/// index -> retrieve -> rerank -> evaluate into one directory.
void cmd_pipeline(const PipelineOptions& options);

}  // namespace rhetrank::cli
