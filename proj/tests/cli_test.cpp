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

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "commands.hpp"
#include "rhetrank/corpus.hpp"
#include "rhetrank/error.hpp"
#include "test_util.hpp"

namespace rhetrank {
namespace {

namespace fs = std::filesystem;
using testing::TempDir;

std::string slurp(const fs::path& path) { return read_text_file(path); }

std::map<std::string, std::vector<std::string>> rankings(const Run& run) {
  std::map<std::string, std::vector<std::string>> out;
  for (const auto& e : run) out[e.query_id].push_back(e.doc_id);
  return out;
}

int run_tool(const std::string& args) {
  const std::string command = std::string(RHETRANK_TOOL) + " " + args + " 2>/dev/null";
  const int status = std::system(command.c_str());
  return status;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    cli::GenerateOptions g;
    g.queries = 10;
    g.background = 20;
    g.output_dir = dir.path() / "gen";
    cli::cmd_generate(g);
    inputs.corpus = dir / "gen/documents.tsv";
    inputs.annotations = dir / "gen/annotations.tsv";
  }
  TempDir dir;
  cli::CorpusInputs inputs;
};

TEST_F(CliTest, KappaZeroRerankReproducesBaselineOrder) {
  cli::cmd_index({inputs, dir / "stats.tsv"});
  cli::RetrieveOptions r;
  r.inputs = inputs;
  r.stats = dir / "stats.tsv";
  r.topics = dir / "gen/topics.tsv";
  r.output = dir / "base.run";
  cli::cmd_retrieve(r);
  cli::RerankOptions k;
  k.inputs = inputs;
  k.stats = r.stats;
  k.topics = r.topics;
  k.run = r.output;
  k.kappa = 0.0;
  k.relation = "contrast";
  k.output = dir / "k0.run";
  cli::cmd_rerank(k);
  const rhetrank::Run base = read_run(slurp(r.output)), reranked = read_run(slurp(k.output));
  EXPECT_EQ(rankings(base), rankings(reranked));
  EXPECT_EQ(base.size(), reranked.size());
}

TEST(Cli, EvaluateToyRunReproducesHandValues) {
  TempDir dir;
  std::ofstream(dir / "toy.run") << "1 Q0 r1 1 3 t\n1 Q0 n1 2 2 t\n1 Q0 r2 3 1 t\n";
  std::ofstream(dir / "toy.qrels") << "1 0 r1 1\n1 0 r2 1\n1 0 n1 0\n1 0 n2 0\n1 0 n3 0\n";
  cli::EvaluateOptions e;
  e.run = dir / "toy.run";
  e.qrels = dir / "toy.qrels";
  e.output_dir = dir / "out";
  cli::cmd_evaluate(e);
  const std::string detail = slurp(dir / "out/run.detail.tsv");
  EXPECT_NE(detail.find("map\t1\t0.833333"), std::string::npos) << detail;
  EXPECT_NE(detail.find("bpref\t1\t0.750000"), std::string::npos) << detail;
  EXPECT_TRUE(fs::exists(dir / "out/run.summary.tsv"));
}

TEST_F(CliTest, MissingQrelsFailsWithoutOutput) {
  const fs::path out = dir / "eval";
  const int status = run_tool("evaluate --run " + (dir / "gen/topics.tsv").string() +
                              " --qrels " + (dir / "missing.txt").string() +
                              " --output-dir " + out.string());
  EXPECT_NE(status, 0);
  EXPECT_FALSE(fs::exists(out));
}

TEST_F(CliTest, MalformedInputLeavesNoPartialFiles) {
  std::ofstream(dir / "bad.run") << "1 Q0 dA 2 0.5 t\n";
  cli::EvaluateOptions e;
  e.run = dir / "bad.run";
  e.qrels = dir / "gen/qrels.txt";
  e.output_dir = dir / "eval";
  EXPECT_THROW(cli::cmd_evaluate(e), FormatError);
  EXPECT_FALSE(fs::exists(e.output_dir));
}

TEST_F(CliTest, PipelineIsDeterministic) {
  std::vector<std::map<std::string, std::string>> outputs;
  for (int i = 0; i < 2; ++i) {
    cli::PipelineOptions p;
    p.inputs = inputs;
    p.topics = dir / "gen/topics.tsv";
    p.qrels = dir / "gen/qrels.txt";
    p.mu = 100;
    p.relation = "contrast";
    p.output_dir = dir / ("pipe" + std::to_string(i));
    cli::cmd_pipeline(p);
    std::map<std::string, std::string> files;
    for (const auto& entry : fs::directory_iterator(p.output_dir)) {
      files[entry.path().filename().string()] = slurp(entry.path());
    }
    outputs.push_back(files);
  }
  EXPECT_EQ(outputs[0], outputs[1]);
  EXPECT_GE(outputs[0].size(), 6u);
}

TEST_F(CliTest, SelectIsDeterministicBySeed) {
  // The default-sized generated collection, on which the seeded relation
  // helps at mu = 100, kappa = 0.5.
  cli::GenerateOptions g;
  g.output_dir = dir / "full";
  cli::cmd_generate(g);
  cli::ObserveOptions o;
  o.inputs = {dir / "full/documents.tsv", dir / "full/annotations.tsv"};
  o.topics = dir / "full/topics.tsv";
  o.qrels = dir / "full/qrels.txt";
  o.mu = 100;
  o.output = dir / "obs.tsv";
  cli::cmd_observe(o);
  for (const char* name : {"s1", "s2"}) {
    cli::SelectOptions s;
    s.observations = {o.output};
    s.seed = 3;
    s.output_dir = dir / name;
    cli::cmd_select(s);
  }
  for (const char* file : {"selections.tsv", "posterior_lambda.tsv", "posterior_beta.tsv",
                           "posterior_means.tsv"}) {
    EXPECT_EQ(slurp(dir / "s1" / file), slurp(dir / "s2" / file)) << file;
  }
  EXPECT_EQ(slurp(dir / "s1/selections.tsv"),
            "repeat\tselected\n1\tcontrast\n2\tcontrast\n3\tcontrast\n4\tcontrast\n5\tcontrast\n");
}

TEST_F(CliTest, ConfigFileSuppliesFlagsAndCommandLineOverrides) {
  std::ofstream(dir / "exp.cfg") << "# experiment\n"
                                 << "corpus = " << inputs.corpus.string() << "\n"
                                 << "annotations = " << inputs.annotations->string() << "\n"
                                 << "output = " << (dir / "from-config.tsv").string() << "\n"
                                 << "folds = 5\n";
  EXPECT_EQ(run_tool("index --config " + (dir / "exp.cfg").string()), 0);
  EXPECT_TRUE(fs::exists(dir / "from-config.tsv"));
  EXPECT_EQ(run_tool("index --config " + (dir / "exp.cfg").string() + " --output " +
                     (dir / "from-flag.tsv").string()),
            0);
  EXPECT_TRUE(fs::exists(dir / "from-flag.tsv"));
  EXPECT_EQ(slurp(dir / "from-flag.tsv"), slurp(dir / "from-config.tsv"));

  std::ofstream(dir / "bad.cfg") << "no_such_key = 1\n";
  EXPECT_NE(run_tool("index --config " + (dir / "bad.cfg").string() + " --corpus " +
                     inputs.corpus.string() + " --output " + (dir / "x.tsv").string()),
            0);
}

TEST_F(CliTest, TagThenDistribution) {
  std::ofstream(dir / "raw.tsv") << "d1\tAlthough it rained, we went. We stayed because it was fun.\n"
                                 << "d2\tIf you go, then call me.\n";
  cli::TagOptions t;
  t.corpus = dir / "raw.tsv";
  t.output = dir / "tags.tsv";
  cli::cmd_tag(t);
  EXPECT_EQ(slurp(t.output), "d1\tcontrast\t0\t3\nd1\texplanation\t7\t11\nd2\tcondition\t0\t3\n");
  cli::DistributionOptions d;
  d.inputs = {t.corpus, t.output};
  d.output = dir / "dist.tsv";
  cli::cmd_distribution(d);
  EXPECT_EQ(slurp(d.output),
            "relation\tpercent\ncondition\t33.33\ncontrast\t33.33\nexplanation\t33.33\n");
}

}  // namespace
}  // namespace rhetrank
