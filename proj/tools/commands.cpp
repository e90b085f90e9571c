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

#include "commands.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <stdexcept>

#include "rhetrank/corpus.hpp"
#include "rhetrank/discourse.hpp"
#include "rhetrank/error.hpp"
#include "rhetrank/evaluation.hpp"
#include "rhetrank/index.hpp"
#include "rhetrank/parallel.hpp"
#include "rhetrank/scoring.hpp"
#include "rhetrank/selection.hpp"
#include "rhetrank/synthetic.hpp"

namespace rhetrank::cli {
namespace {

std::string fixed(double value, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
  return buf;
}

Collection load_collection(const CorpusInputs& inputs) {
  std::vector<Document> docs = load_documents(inputs.corpus);
  if (inputs.annotations) {
    AnnotatedDocuments annotated =
        parse_annotations(read_text_file(*inputs.annotations), std::move(docs));
    if (annotated.skipped_lines > 0) {
      std::cerr << "warning: skipped " << annotated.skipped_lines
                << " annotation lines naming unknown documents\n";
    }
    docs = std::move(annotated.documents);
  }
  return Collection(std::move(docs));
}

Metric metric_from(const std::string& name) {
  if (auto m = parse_metric(name)) return *m;
  throw Error("unknown metric '" + name + "' (expected map, bpref or ndcg)");
}

RerankConfig make_config(double kappa, double mu, const std::string& relation,
                         bool all_relations, bool span_weight) {
  RerankConfig config;
  config.kappa = kappa;
  config.mu = mu;
  config.span_weight = span_weight;
  if (all_relations) {
    if (!relation.empty()) throw Error("--relation and --all-relations are exclusive");
    config.mode = RerankMode::kAllRelations;
  } else {
    if (relation.empty()) throw Error("either --relation or --all-relations is required");
    config.relation = relation_from_string(relation);
  }
  try {
    config.validate();
  } catch (const std::invalid_argument& e) {
    throw Error(e.what());
  }
  return config;
}

Run baseline_run(std::span<const Query> queries, const Collection& collection,
                 const CollectionStats& stats, double mu, std::size_t depth,
                 const std::string& tag) {
  if (!(mu > 0)) throw Error("mu must be positive");
  std::vector<Run> per_query(queries.size());
  parallel_for(queries.size(), [&](std::size_t q) {
    per_query[q] = to_run(queries[q].id,
                          retrieve(queries[q], collection, stats, mu, depth), tag, false);
  });
  Run run;
  for (Run& r : per_query) run.insert(run.end(), r.begin(), r.end());
  return run;
}

Run rerank_run(const Run& input, std::span<const Query> queries,
               const Collection& collection, const CollectionStats& stats,
               const RerankConfig& config, const std::string& tag) {
  std::map<std::string, const Query*> by_id;
  for (const Query& q : queries) by_id[q.id] = &q;
  std::vector<std::string> order;
  std::map<std::string, std::vector<const Document*>> candidates;
  for (const RunEntry& e : input) {
    auto [it, inserted] = candidates.try_emplace(e.query_id);
    if (inserted) order.push_back(e.query_id);
    const Document* doc = collection.find(e.doc_id);
    if (doc == nullptr) throw Error("run names unknown document '" + e.doc_id + "'");
    it->second.push_back(doc);
  }
  std::vector<Run> per_query(order.size());
  for (const std::string& qid : order) {
    if (!by_id.count(qid)) throw Error("run names query '" + qid + "' missing from topics");
  }
  parallel_for(order.size(), [&](std::size_t i) {
    const std::string& qid = order[i];
    per_query[i] = to_run(qid, rerank(*by_id[qid], candidates[qid], stats, config), tag);
  });
  Run run;
  for (Run& r : per_query) run.insert(run.end(), r.begin(), r.end());
  return run;
}

std::string rerank_tag(const RerankConfig& config) {
  return config.mode == RerankMode::kAllRelations ? "all-relations"
                                                  : std::string(to_string(*config.relation));
}

// Detail, summary and (with a baseline) per-metric diff files for one run.
void add_evaluation(OutputSet& out, const Run& run, const Judgments& judgments,
                    const std::vector<std::string>& metric_names, const Run* baseline,
                    const fs::path& dir, const std::string& name) {
  std::string detail;
  std::vector<SummaryRow> rows;
  std::vector<MetricReport> baselines;
  for (const std::string& metric_name : metric_names) {
    const Metric metric = metric_from(metric_name);
    MetricReport report = evaluate(run, judgments, metric);
    detail += write_detail(report);
    if (baseline != nullptr) {
      MetricReport base = evaluate(*baseline, judgments, metric);
      out.add(dir / (name + "." + metric_name + ".diff.tsv"),
              write_diff(per_query_diff(report.per_query, base.per_query)));
      baselines.push_back(std::move(base));
    }
    rows.push_back({name, std::move(report)});
  }
  out.add(dir / (name + ".detail.tsv"), detail);
  out.add(dir / (name + ".summary.tsv"), write_summary(rows, baselines));
}

}  // namespace

void OutputSet::add(fs::path path, std::string content) {
  files_.emplace_back(std::move(path), std::move(content));
}

void OutputSet::commit() {
  std::vector<fs::path> temporaries;
  try {
    for (const auto& [path, content] : files_) {
      if (path.has_parent_path()) fs::create_directories(path.parent_path());
      fs::path tmp = path;
      tmp += ".tmp";
      std::ofstream stream(tmp, std::ios::binary | std::ios::trunc);
      if (!stream) throw Error("cannot write '" + tmp.string() + "'");
      temporaries.push_back(tmp);
      stream << content;
      stream.close();
      if (!stream) throw Error("failed writing '" + tmp.string() + "'");
    }
  } catch (...) {
    std::error_code ignored;
    for (const fs::path& tmp : temporaries) fs::remove(tmp, ignored);
    throw;
  }
  for (std::size_t i = 0; i < files_.size(); ++i) {
    fs::rename(temporaries[i], files_[i].first);
  }
}

void cmd_index(const IndexOptions& options) {
  const Collection collection = load_collection(options.inputs);
  OutputSet out;
  out.add(options.output, write_stats(build_stats(collection.documents())));
  out.commit();
}

void cmd_retrieve(const RetrieveOptions& options) {
  const Collection collection = load_collection(options.inputs);
  const CollectionStats stats = read_stats(read_text_file(options.stats));
  const std::vector<Query> queries = parse_topics(read_text_file(options.topics));
  OutputSet out;
  out.add(options.output,
          write_run(baseline_run(queries, collection, stats, options.mu, options.depth,
                                 options.tag)));
  out.commit();
}

void cmd_rerank(const RerankOptions& options) {
  const RerankConfig config = make_config(options.kappa, options.mu, options.relation,
                                          options.all_relations, options.span_weight);
  const Collection collection = load_collection(options.inputs);
  const CollectionStats stats = read_stats(read_text_file(options.stats));
  const std::vector<Query> queries = parse_topics(read_text_file(options.topics));
  const Run input = read_run(read_text_file(options.run));
  const std::string tag = options.tag.empty() ? rerank_tag(config) : options.tag;
  OutputSet out;
  out.add(options.output, write_run(rerank_run(input, queries, collection, stats, config, tag)));
  out.commit();
}

void cmd_evaluate(const EvaluateOptions& options) {
  const Run run = read_run(read_text_file(options.run));
  const Judgments judgments = parse_qrels(read_text_file(options.qrels));
  std::optional<Run> baseline;
  if (options.baseline) baseline = read_run(read_text_file(*options.baseline));
  OutputSet out;
  add_evaluation(out, run, judgments, options.metrics, baseline ? &*baseline : nullptr,
                 options.output_dir, options.name);
  out.commit();
}

void cmd_tune(const TuneOptions& options) {
  const Collection collection = load_collection(options.inputs);
  const CollectionStats stats = build_stats(collection.documents());
  const std::vector<Query> queries = parse_topics(read_text_file(options.topics));
  const Judgments judgments = parse_qrels(read_text_file(options.qrels));
  CvSetup setup;
  setup.metric = metric_from(options.metric);
  setup.rerank = make_config(options.kappa_grid.empty() ? 0.0 : options.kappa_grid.front(),
                             options.mu_grid.empty() ? 1.0 : options.mu_grid.front(),
                             options.relation, options.all_relations, options.span_weight);
  setup.depth = options.depth;
  setup.seed = options.seed;
  CvGrid grid{options.mu_grid, options.kappa_grid, options.folds};
  CvResult result;
  try {
    result = cross_validate(queries, collection, stats, judgments, grid, setup);
  } catch (const std::invalid_argument& e) {
    throw Error(e.what());
  }
  OutputSet out;
  out.add(options.output, write_cv_report(result));
  out.commit();
}

void cmd_observe(const ObserveOptions& options) {
  const Collection collection = load_collection(options.inputs);
  const CollectionStats stats = build_stats(collection.documents());
  const std::vector<Query> queries = parse_topics(read_text_file(options.topics));
  const Judgments judgments = parse_qrels(read_text_file(options.qrels));
  CvSetup setup;
  setup.metric = metric_from(options.metric);
  setup.depth = options.depth;
  setup.rerank.span_weight = options.span_weight;
  std::vector<std::map<std::string, double>> scores(kNumRelations);
  parallel_for(kNumRelations, [&](std::size_t r) {
    CvSetup local = setup;
    local.rerank.relation = kAllRelations[r];
    scores[r] = evaluate_setting(queries, collection, stats, judgments, options.mu,
                                 options.kappa, local);
  });
  ScoreTable table;
  for (std::size_t r = 0; r < kNumRelations; ++r) {
    if (!scores[r].empty()) table[kAllRelations[r]] = std::move(scores[r]);
  }
  OutputSet out;
  out.add(options.output, write_observations(table));
  out.commit();
}

void cmd_select(const SelectOptions& options) {
  if (options.observations.empty()) throw Error("no observation files given");
  std::vector<ScoreTable> sets;
  for (const fs::path& path : options.observations) {
    sets.push_back(parse_observations(read_text_file(path)));
  }
  SelectionOptions selection;
  selection.hyper = {options.alpha, options.nu, options.phi};
  std::vector<PoolingRepeat> repeats;
  try {
    repeats = pooled_inference(sets, options.seed, options.repeats, selection);
  } catch (const std::invalid_argument& e) {
    throw Error(e.what());
  }

  std::string selections = "repeat\tselected\n";
  std::string means = "repeat\trelation\tx\ty\tlambda_mean\n";
  std::string lambda = "repeat\trelation\tlambda\tdensity\n";
  std::string beta = "repeat\tbeta\tdensity\n";
  for (std::size_t r = 0; r < repeats.size(); ++r) {
    const PoolingRepeat& repeat = repeats[r];
    const std::string index = std::to_string(r + 1);
    selections += index + '\t' + std::string(to_string(repeat.selection.relation)) + '\n';
    for (std::size_t j = 0; j < repeat.observations.size(); ++j) {
      const Observation& o = repeat.observations[j];
      const PosteriorSummary& p = repeat.selection.posteriors[j];
      const std::string label(to_string(o.relation));
      means += index + '\t' + label + '\t' + fixed(o.x, 6) + '\t' + fixed(o.y, 6) + '\t' +
               fixed(p.lambda_mean, 9) + '\n';
      for (std::size_t k = 0; k < p.density.grid.size(); ++k) {
        lambda += index + '\t' + label + '\t' + fixed(p.density.grid[k], 9) + '\t' +
                  fixed(p.density.values[k], 9) + '\n';
      }
    }
    const BetaPosterior b = posterior_beta(repeat.observations, selection);
    for (std::size_t k = 0; k < b.density.grid.size(); ++k) {
      beta += index + '\t' + fixed(b.density.grid[k], 9) + '\t' +
              fixed(b.density.values[k], 9) + '\n';
    }
  }
  OutputSet out;
  out.add(options.output_dir / "selections.tsv", selections);
  out.add(options.output_dir / "posterior_means.tsv", means);
  out.add(options.output_dir / "posterior_lambda.tsv", lambda);
  out.add(options.output_dir / "posterior_beta.tsv", beta);
  out.commit();
}

void cmd_tag(const TagOptions& options) {
  std::vector<Document> docs = load_documents(options.corpus);
  std::vector<CueRule> rules =
      options.rules ? parse_cue_rules(read_text_file(*options.rules)) : default_cue_rules();
  parallel_for(docs.size(), [&](std::size_t i) { docs[i].spans = heuristic_tag(docs[i], rules); });
  OutputSet out;
  out.add(options.output, write_annotations(docs));
  out.commit();
}

void cmd_distribution(const DistributionOptions& options) {
  const Collection collection = load_collection(options.inputs);
  std::string table = "relation\tpercent\n";
  for (const auto& [label, percent] : relation_distribution(collection.documents())) {
    table += std::string(to_string(label)) + '\t' + fixed(percent, 2) + '\n';
  }
  OutputSet out;
  out.add(options.output, table);
  out.commit();
}

void cmd_generate(const GenerateOptions& options) {
  SyntheticSpec spec;
  spec.num_queries = options.queries;
  spec.background_documents = options.background;
  spec.seeded_relation = relation_from_string(options.relation);
  spec.query_prefix = options.query_prefix;
  spec.seed = options.seed;
  const SyntheticCollection synthetic = generate_synthetic(spec);
  OutputSet out;
  out.add(options.output_dir / "documents.tsv", write_documents(synthetic.documents));
  out.add(options.output_dir / "topics.tsv", write_topics(synthetic.queries));
  out.add(options.output_dir / "qrels.txt", write_qrels(synthetic.judgments));
  out.add(options.output_dir / "annotations.tsv", write_annotations(synthetic.documents));
  out.commit();
}

void cmd_pipeline(const PipelineOptions& options) {
  const RerankConfig config = make_config(options.kappa, options.mu, options.relation,
                                          options.all_relations, options.span_weight);
  const Collection collection = load_collection(options.inputs);
  const CollectionStats stats = build_stats(collection.documents());
  const std::vector<Query> queries = parse_topics(read_text_file(options.topics));
  const Judgments judgments = parse_qrels(read_text_file(options.qrels));

  const Run baseline =
      baseline_run(queries, collection, stats, options.mu, options.depth, "baseline");
  const Run reranked =
      rerank_run(baseline, queries, collection, stats, config, rerank_tag(config));

  OutputSet out;
  const fs::path& dir = options.output_dir;
  out.add(dir / "stats.tsv", write_stats(stats));
  out.add(dir / "baseline.run", write_run(baseline));
  out.add(dir / "reranked.run", write_run(reranked));
  add_evaluation(out, reranked, judgments, {"map", "bpref", "ndcg"}, &baseline, dir,
                 "reranked");
  out.commit();
}

}  // namespace rhetrank::cli
