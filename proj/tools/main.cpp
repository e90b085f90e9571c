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

// Command-line driver. Every subcommand can also read a flat `key = value`
// config file via --config; keys are the long flag names and flags given on
// the command line take precedence over file values.

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "commands.hpp"
#include "rhetrank/error.hpp"

namespace rc = rhetrank::cli;

namespace {

std::string trim(std::string s) {
  auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> items;
  std::string item;
  for (char c : text + ',') {
    if (c == ',') {
      item = trim(item);
      if (!item.empty()) items.push_back(item);
      item.clear();
    } else {
      item += c;
    }
  }
  return items;
}

std::vector<double> parse_grid(const std::string& text, const char* name) {
  std::vector<double> values;
  for (const std::string& item : split_list(text)) {
    double v = 0.0;
    auto [end, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (ec != std::errc() || end != item.data() + item.size()) {
      throw rhetrank::Error(std::string("bad value '") + item + "' in --" + name);
    }
    values.push_back(v);
  }
  if (values.empty()) throw rhetrank::Error(std::string("--") + name + " is empty");
  return values;
}

struct ConfigEntry {
  std::string key;
  std::string value;
};

std::vector<ConfigEntry> read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw rhetrank::Error("cannot read config file '" + path + "'");
  std::vector<ConfigEntry> entries;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw rhetrank::FormatError(number, "config: expected 'key = value'");
    }
    std::string key = trim(line.substr(0, eq));
    std::replace(key.begin(), key.end(), '_', '-');
    if (key.empty()) throw rhetrank::FormatError(number, "config: empty key");
    entries.push_back({key, trim(line.substr(eq + 1))});
  }
  return entries;
}

// Removes --config from argv and splices the file's entries in as flags
// right after the subcommand name, so later command-line flags win.
std::vector<std::string> expand_config(const CLI::App& app, std::vector<std::string> args) {
  std::optional<std::string> config;
  for (std::size_t i = 1; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw rhetrank::Error("--config needs a path");
      config = args[i + 1];
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i),
                 args.begin() + static_cast<std::ptrdiff_t>(i + 2));
      break;
    }
    if (args[i].rfind("--config=", 0) == 0) {
      config = args[i].substr(9);
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
      break;
    }
  }
  if (!config) return args;

  const auto sub_pos = std::find_if(args.begin() + 1, args.end(), [](const std::string& a) {
    return !a.empty() && a.front() != '-';
  });
  if (sub_pos == args.end()) throw rhetrank::Error("--config given without a subcommand");
  const CLI::App* sub = app.get_subcommand_no_throw(*sub_pos);
  if (sub == nullptr) return args;  // let the parser report the unknown subcommand

  std::vector<std::string> injected;
  for (const ConfigEntry& entry : read_config(*config)) {
    const std::string flag = "--" + entry.key;
    if (sub->get_option_no_throw(flag) != nullptr) {
      injected.push_back(flag + "=" + entry.value);
      continue;
    }
    // Keys belonging to other subcommands are allowed so one experiment file
    // can drive every step; keys nobody knows are typos.
    bool known = false;
    for (const CLI::App* other : app.get_subcommands({})) {
      known = known || other->get_option_no_throw(flag) != nullptr;
    }
    if (!known) throw rhetrank::Error("config: unknown key '" + entry.key + "'");
  }
  args.insert(sub_pos + 1, injected.begin(), injected.end());
  return args;
}

void add_corpus(CLI::App* sub, rc::CorpusInputs& inputs) {
  sub->add_option("--corpus", inputs.corpus, "Document file or directory")->required();
  sub->add_option("--annotations", inputs.annotations, "Discourse annotation file");
}

// --relation NAME, or --mode all / --all-relations.
void add_relation(CLI::App* sub, std::string& relation, bool& all_relations, std::string& mode) {
  sub->add_option("--relation", relation, "Relation used for single-relation reranking");
  sub->add_flag("--all-relations", all_relations, "Average over every relation present");
  sub->add_option("--mode", mode, "single or all")
      ->check(CLI::IsMember({"single", "all"}));
}

void apply_mode(const std::string& mode, bool& all_relations) {
  if (mode == "all") all_relations = true;
  if (mode == "single" && all_relations) {
    throw rhetrank::Error("--mode single conflicts with --all-relations");
  }
}

void add_span_weight(CLI::App* sub, bool& span_weight) {
  sub->add_flag("--span-weight,!--no-span-weight", span_weight,
                "Multiply single-relation scores by p(psi|d)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rhetrank: rhetorical-relation reranking and relation selection"};
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.add_option("--config", "Flat key = value file supplying flag values");

  std::string mode;
  std::string mu_grid = "100,500,800,1000,2000,3000,4000,5000,8000,10000";
  std::string kappa_grid = "0.1,0.3,0.5,0.7,0.9";
  std::string metrics = "map,bpref,ndcg";
  std::string observations;

  rc::IndexOptions index;
  auto* index_cmd = app.add_subcommand("index", "Build a collection statistics snapshot");
  add_corpus(index_cmd, index.inputs);
  index_cmd->add_option("--output", index.output, "Snapshot path")->required();

  rc::RetrieveOptions retrieve;
  auto* retrieve_cmd = app.add_subcommand("retrieve", "First-stage query-likelihood run");
  add_corpus(retrieve_cmd, retrieve.inputs);
  retrieve_cmd->add_option("--stats", retrieve.stats, "Statistics snapshot")->required();
  retrieve_cmd->add_option("--topics", retrieve.topics, "Topic file")->required();
  retrieve_cmd->add_option("--mu", retrieve.mu, "Dirichlet prior")->capture_default_str();
  retrieve_cmd->add_option("--depth", retrieve.depth, "Documents per query")
      ->capture_default_str();
  retrieve_cmd->add_option("--tag", retrieve.tag, "Run tag")->capture_default_str();
  retrieve_cmd->add_option("--output", retrieve.output, "Run path")->required();

  rc::RerankOptions rerank;
  auto* rerank_cmd = app.add_subcommand("rerank", "Rerank a run with relation evidence");
  add_corpus(rerank_cmd, rerank.inputs);
  rerank_cmd->add_option("--stats", rerank.stats, "Statistics snapshot")->required();
  rerank_cmd->add_option("--topics", rerank.topics, "Topic file")->required();
  rerank_cmd->add_option("--run", rerank.run, "Baseline run")->required();
  rerank_cmd->add_option("--mu", rerank.mu, "Dirichlet prior")->capture_default_str();
  rerank_cmd->add_option("--kappa", rerank.kappa, "Mixture weight")->capture_default_str();
  add_relation(rerank_cmd, rerank.relation, rerank.all_relations, mode);
  add_span_weight(rerank_cmd, rerank.span_weight);
  rerank_cmd->add_option("--tag", rerank.tag, "Run tag (default: relation name)");
  rerank_cmd->add_option("--output", rerank.output, "Run path")->required();

  rc::EvaluateOptions evaluate;
  auto* evaluate_cmd = app.add_subcommand("evaluate", "Score a run against judgments");
  evaluate_cmd->add_option("--run", evaluate.run, "Run to evaluate")->required();
  evaluate_cmd->add_option("--qrels", evaluate.qrels, "Relevance judgments")->required();
  evaluate_cmd->add_option("--metrics", metrics, "Comma-separated: map,bpref,ndcg")
      ->capture_default_str();
  evaluate_cmd->add_option("--baseline", evaluate.baseline, "Run to compare against");
  evaluate_cmd->add_option("--name", evaluate.name, "Report file prefix")
      ->capture_default_str();
  evaluate_cmd->add_option("--output-dir", evaluate.output_dir, "Report directory")
      ->required();

  rc::TuneOptions tune;
  auto* tune_cmd = app.add_subcommand("tune", "Cross-validate mu and kappa");
  add_corpus(tune_cmd, tune.inputs);
  tune_cmd->add_option("--topics", tune.topics, "Topic file")->required();
  tune_cmd->add_option("--qrels", tune.qrels, "Relevance judgments")->required();
  add_relation(tune_cmd, tune.relation, tune.all_relations, mode);
  add_span_weight(tune_cmd, tune.span_weight);
  tune_cmd->add_option("--metric", tune.metric, "map, bpref or ndcg")->capture_default_str();
  tune_cmd->add_option("--mu-grid", mu_grid, "Comma-separated mu values")
      ->capture_default_str();
  tune_cmd->add_option("--kappa-grid", kappa_grid, "Comma-separated kappa values")
      ->capture_default_str();
  tune_cmd->add_option("--folds", tune.folds, "Number of folds")->capture_default_str();
  tune_cmd->add_option("--depth", tune.depth, "First-stage depth")->capture_default_str();
  tune_cmd->add_option("--seed", tune.seed, "Fold assignment seed")->capture_default_str();
  tune_cmd->add_option("--output", tune.output, "CV report path")->required();

  rc::ObserveOptions observe;
  auto* observe_cmd =
      app.add_subcommand("observe", "Per-query scores of every relation (observation file)");
  add_corpus(observe_cmd, observe.inputs);
  observe_cmd->add_option("--topics", observe.topics, "Topic file")->required();
  observe_cmd->add_option("--qrels", observe.qrels, "Relevance judgments")->required();
  observe_cmd->add_option("--mu", observe.mu, "Dirichlet prior")->capture_default_str();
  observe_cmd->add_option("--kappa", observe.kappa, "Mixture weight")->capture_default_str();
  add_span_weight(observe_cmd, observe.span_weight);
  observe_cmd->add_option("--metric", observe.metric, "map, bpref or ndcg")
      ->capture_default_str();
  observe_cmd->add_option("--depth", observe.depth, "First-stage depth")
      ->capture_default_str();
  observe_cmd->add_option("--output", observe.output, "Observation file path")->required();

  rc::SelectOptions select;
  auto* select_cmd = app.add_subcommand("select", "Bayesian selection of the best relation");
  select_cmd->add_option("--observations", observations,
                         "Comma-separated observation files, one per query set")
      ->required();
  select_cmd->add_option("--seed", select.seed, "Pooling seed")->capture_default_str();
  select_cmd->add_option("--repeats", select.repeats, "Pooling repeats")
      ->capture_default_str();
  select_cmd->add_option("--alpha", select.alpha, "Gamma shape of the rates")
      ->capture_default_str();
  select_cmd->add_option("--nu", select.nu, "Gamma shape of beta")->capture_default_str();
  select_cmd->add_option("--phi", select.phi, "Gamma rate of beta")->capture_default_str();
  select_cmd->add_option("--output-dir", select.output_dir, "Output directory")->required();

  rc::TagOptions tag;
  auto* tag_cmd = app.add_subcommand("tag", "Cue-phrase discourse tagging");
  tag_cmd->add_option("--corpus", tag.corpus, "Document file or directory")->required();
  tag_cmd->add_option("--rules", tag.rules, "Cue rule file (default: built-in rules)");
  tag_cmd->add_option("--output", tag.output, "Annotation file path")->required();

  rc::DistributionOptions distribution;
  auto* distribution_cmd =
      app.add_subcommand("distribution", "Percentage of spans per relation");
  add_corpus(distribution_cmd, distribution.inputs);
  distribution_cmd->add_option("--output", distribution.output, "Table path")->required();

  rc::GenerateOptions generate;
  auto* generate_cmd = app.add_subcommand("generate", "Write a synthetic test collection");
  generate_cmd->add_option("--queries", generate.queries, "Number of queries")
      ->capture_default_str();
  generate_cmd->add_option("--background", generate.background, "Background documents")
      ->capture_default_str();
  generate_cmd->add_option("--relation", generate.relation, "Seeded relation")
      ->capture_default_str();
  generate_cmd->add_option("--query-prefix", generate.query_prefix, "Query id prefix")
      ->capture_default_str();
  generate_cmd->add_option("--seed", generate.seed, "Generator seed")->capture_default_str();
  generate_cmd->add_option("--output-dir", generate.output_dir, "Output directory")
      ->required();

  rc::PipelineOptions pipeline;
  auto* pipeline_cmd =
      app.add_subcommand("pipeline", "index, retrieve, rerank and evaluate in one go");
  add_corpus(pipeline_cmd, pipeline.inputs);
  pipeline_cmd->add_option("--topics", pipeline.topics, "Topic file")->required();
  pipeline_cmd->add_option("--qrels", pipeline.qrels, "Relevance judgments")->required();
  pipeline_cmd->add_option("--mu", pipeline.mu, "Dirichlet prior")->capture_default_str();
  pipeline_cmd->add_option("--kappa", pipeline.kappa, "Mixture weight")
      ->capture_default_str();
  add_relation(pipeline_cmd, pipeline.relation, pipeline.all_relations, mode);
  add_span_weight(pipeline_cmd, pipeline.span_weight);
  pipeline_cmd->add_option("--depth", pipeline.depth, "First-stage depth")
      ->capture_default_str();
  pipeline_cmd->add_option("--output-dir", pipeline.output_dir, "Output directory")
      ->required();

  try {
    std::vector<std::string> args =
        expand_config(app, std::vector<std::string>(argv, argv + argc));
    std::reverse(args.begin(), args.end());
    args.pop_back();  // program name
    try {
      app.parse(args);
    } catch (const CLI::ParseError& e) {
      return app.exit(e);
    }

    if (index_cmd->parsed()) {
      rc::cmd_index(index);
    } else if (retrieve_cmd->parsed()) {
      rc::cmd_retrieve(retrieve);
    } else if (rerank_cmd->parsed()) {
      apply_mode(mode, rerank.all_relations);
      rc::cmd_rerank(rerank);
    } else if (evaluate_cmd->parsed()) {
      evaluate.metrics = split_list(metrics);
      rc::cmd_evaluate(evaluate);
    } else if (tune_cmd->parsed()) {
      apply_mode(mode, tune.all_relations);
      tune.mu_grid = parse_grid(mu_grid, "mu-grid");
      tune.kappa_grid = parse_grid(kappa_grid, "kappa-grid");
      rc::cmd_tune(tune);
    } else if (observe_cmd->parsed()) {
      rc::cmd_observe(observe);
    } else if (select_cmd->parsed()) {
      for (const std::string& path : split_list(observations)) {
        select.observations.emplace_back(path);
      }
      rc::cmd_select(select);
    } else if (tag_cmd->parsed()) {
      rc::cmd_tag(tag);
    } else if (distribution_cmd->parsed()) {
      rc::cmd_distribution(distribution);
    } else if (generate_cmd->parsed()) {
      rc::cmd_generate(generate);
    } else if (pipeline_cmd->parsed()) {
      apply_mode(mode, pipeline.all_relations);
      rc::cmd_pipeline(pipeline);
    }
  } catch (const std::exception& e) {
    std::cerr << "rhetrank: error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
