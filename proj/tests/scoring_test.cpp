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

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "rhetrank/index.hpp"
#include "rhetrank/scoring.hpp"
#include "test_util.hpp"

namespace rhetrank {
namespace {

using testing::doc;
using testing::query;
using Tokens = std::vector<std::string>;

std::vector<std::string> order_of(const std::vector<ScoredDoc>& ranked) {
  std::vector<std::string> ids;
  for (const auto& s : ranked) ids.push_back(s.doc_id);
  return ids;
}

TEST(DirichletQl, HandValue) {
  // p(a|C) = 3/6 = 0.5.
  const std::vector<Document> docs{doc("1", "a b a"), doc("2", "b c a")};
  const CollectionStats stats = build_stats(docs);
  EXPECT_NEAR(dirichlet_ql(query("q", "a"), docs[0], stats, 1.0), std::log(0.625), 1e-15);
}

TEST(DirichletQl, LargeMuApproachesCollectionModel) {
  const std::vector<Document> docs{doc("1", "a b a"), doc("2", "b c a d")};
  const CollectionStats stats = build_stats(docs);
  for (const char* term : {"a", "b", "c", "zz"}) {
    const double p = std::exp(dirichlet_ql(query("q", term), docs[0], stats, 1e12));
    EXPECT_NEAR(p / stats.collection_probability(term), 1.0, 1e-6) << term;
  }
}

TEST(DirichletQl, AdditiveOverRepeatedTerms) {
  const std::vector<Document> docs{doc("1", "a b a"), doc("2", "b c")};
  const CollectionStats stats = build_stats(docs);
  EXPECT_DOUBLE_EQ(dirichlet_ql(query("q", "b b"), docs[0], stats, 5.0),
                   2.0 * dirichlet_ql(query("q", "b"), docs[0], stats, 5.0));
}

TEST(NormalizedQl, Values) {
  EXPECT_NEAR(normalized_ql(std::log(0.25), 2), 0.5, 1e-15);
  EXPECT_EQ(normalized_ql(0.0, 3), 1.0);
  EXPECT_LT(normalized_ql(-3.0, 2), normalized_ql(-2.5, 2));
}

TEST(PqGivenPsi, HandValue) {
  const std::vector<Document> docs{doc("1", "a b c d")};
  const CollectionStats stats = build_stats(docs);  // V = 4
  const Tokens psi{"a", "a", "c"};
  EXPECT_NEAR(p_q_given_psi(query("q", "a b"), psi, stats), std::log(3.0 / 7) + std::log(1.0 / 7),
              1e-14);
}

TEST(PqGivenPsi, CopyOfQuery) {
  const std::vector<Document> docs{doc("1", "a b c d e")};
  const CollectionStats stats = build_stats(docs);  // V = 5
  const Query q = query("q", "a b c");
  EXPECT_NEAR(p_q_given_psi(q, q.terms, stats), 3.0 * std::log(2.0 / 8.0), 1e-14);
}

TEST(PqGivenPsi, AbsentTermIsFinite) {
  const std::vector<Document> docs{doc("1", "a b")};
  const CollectionStats stats = build_stats(docs);
  const Tokens psi{"a"};
  EXPECT_NEAR(p_q_given_psi(query("q", "zz"), psi, stats), std::log(1.0 / 3.0), 1e-15);
}

TEST(PqGivenPsi, EmptyPsiIsError) {
  const std::vector<Document> docs{doc("1", "a b")};
  const CollectionStats stats = build_stats(docs);
  EXPECT_THROW(p_q_given_psi(query("q", "a"), Tokens{}, stats), std::invalid_argument);
}

TEST(PPsiGivenD, HandValue) {
  const std::vector<Document> docs{doc("1", "a b a"), doc("2", "c")};
  const CollectionStats stats = build_stats(docs);  // V = 3
  EXPECT_NEAR(p_psi_given_d(Tokens{"a"}, docs[0], stats), std::log(3.0 / 6.0), 1e-15);
}

TEST(PPsiGivenD, SmoothingFloor) {
  const std::vector<Document> docs{doc("1", "a b a"), doc("2", "c d")};
  const CollectionStats stats = build_stats(docs);  // V = 4
  EXPECT_NEAR(p_psi_given_d(Tokens{"c", "d", "c"}, docs[0], stats), 3.0 * std::log(1.0 / 7.0),
              1e-14);
}

TEST(PPsiGivenD, MonotoneInFrequency) {
  const std::vector<Document> docs{doc("1", "a a a"), doc("2", "a b c")};
  const CollectionStats stats = build_stats(docs);
  EXPECT_GT(p_psi_given_d(Tokens{"a", "a"}, docs[0], stats),
            p_psi_given_d(Tokens{"a", "a"}, docs[1], stats));
}

class MixtureTest : public ::testing::Test {
 protected:
  std::vector<Document> docs{doc("1", "a b a c"), doc("2", "b c d")};
  CollectionStats stats = build_stats(docs);
  Query q = query("q", "a d");
  Tokens psi{"d", "a", "b"};
  double baseline = normalized_ql(dirichlet_ql(q, docs[0], stats, 50.0), 2);
  double relation = normalized_ql(p_q_given_psi(q, psi, stats), 2);
};

TEST_F(MixtureTest, KappaZeroIsBaseline) {
  EXPECT_EQ(mixture_score(q, docs[0], psi, stats, 0.0, 50.0), baseline);
}

TEST_F(MixtureTest, KappaOneIsRelationModel) {
  EXPECT_EQ(mixture_score(q, docs[0], psi, stats, 1.0, 50.0), relation);
}

TEST_F(MixtureTest, LinearInKappa) {
  EXPECT_NEAR(mixture_score(q, docs[0], psi, stats, 0.5, 50.0), 0.5 * (baseline + relation),
              1e-15);
}

TEST_F(MixtureTest, MonotoneInKappaTowardsBetterComponent) {
  double previous = mixture_score(q, docs[0], psi, stats, 0.0, 50.0);
  for (double kappa = 0.1; kappa <= 1.0; kappa += 0.1) {
    const double current = mixture_score(q, docs[0], psi, stats, kappa, 50.0);
    if (relation > baseline) {
      EXPECT_GE(current, previous);
    } else {
      EXPECT_LE(current, previous);
    }
    previous = current;
  }
}

TEST(Mixture, ArithmeticOfComponents) {
  // Components 0.2 and 0.6 mix to 0.4 at kappa 0.5.
  EXPECT_DOUBLE_EQ((1 - 0.5) * 0.2 + 0.5 * 0.6, 0.4);
}

TEST(Rerank, TwoDocumentContrastToy) {
  // d2 holds the query term inside its only contrast span; d1 has neither.
  const std::vector<Document> docs{
      doc("d1", "a b c"), doc("d2", "x y a b", {{RelationLabel::kContrast, 0, 2}})};
  const CollectionStats stats = build_stats(docs);  // T = 7, V = 5, p(x|C) = 1/7
  RerankConfig config;
  config.kappa = 0.9;
  config.mu = 10.0;
  config.relation = RelationLabel::kContrast;
  const std::vector<const Document*> candidates{&docs[0], &docs[1]};
  const auto ranked = rerank(query("q", "x"), candidates, stats, config);
  ASSERT_EQ(ranked.size(), 2u);
  EXPECT_EQ(ranked[0].doc_id, "d2");
  // d2: 0.1 * (1 + 10/7) / 14 + 0.9 * (1 + 1) / (2 + 5).
  EXPECT_NEAR(ranked[0].final_score, 0.1 * (17.0 / 98.0) + 0.9 * (2.0 / 7.0), 1e-15);
  // d1 lacks the relation and keeps its normalized baseline (10/7) / 13.
  EXPECT_NEAR(ranked[1].final_score, 10.0 / 91.0, 1e-15);
  EXPECT_NEAR(ranked[1].baseline_score, std::log(10.0 / 91.0), 1e-15);
}

TEST(Rerank, SpanWeightMultipliesByPsiLikelihood) {
  const std::vector<Document> docs{doc("d2", "x y a b", {{RelationLabel::kContrast, 0, 2}}),
                                   doc("d1", "a b c")};
  const CollectionStats stats = build_stats(docs);
  RerankConfig config;
  config.kappa = 0.9;
  config.mu = 10.0;
  config.relation = RelationLabel::kContrast;
  config.span_weight = true;
  const std::vector<const Document*> candidates{&docs[0]};
  const auto ranked = rerank(query("q", "x"), candidates, stats, config);
  // p(psi|d) = ((1 + 1) / (4 + 5))^2, per token 2/9.
  EXPECT_NEAR(ranked[0].final_score, (0.1 * (17.0 / 98.0) + 0.9 * (2.0 / 7.0)) * (2.0 / 9.0),
              1e-15);
}

// A random corpus with random spans, for the ranking properties below.
struct RandomCorpus {
  std::vector<Document> docs;
  CollectionStats stats;
  std::vector<const Document*> candidates;
  std::vector<Query> queries;

  explicit RandomCorpus(unsigned seed) {
    std::mt19937 rng(seed);
    for (int d = 0; d < 40; ++d) {
      Document document;
      document.id = "d" + std::to_string(d);
      const std::size_t len = 3 + rng() % 20;
      for (std::size_t i = 0; i < len; ++i) {
        document.tokens.push_back(std::string(1, static_cast<char>('a' + rng() % 12)));
      }
      for (RelationLabel label : kAllRelations) {
        if (rng() % 4 != 0) continue;
        const std::size_t start = rng() % len;
        document.spans.push_back({label, start, start + 1 + rng() % (len - start)});
      }
      std::sort(document.spans.begin(), document.spans.end());
      docs.push_back(std::move(document));
    }
    stats = build_stats(docs);
    for (const auto& d : docs) candidates.push_back(&d);
    for (int q = 0; q < 10; ++q) {
      Query query{"q" + std::to_string(q), {}};
      for (unsigned i = 0; i < 1 + rng() % 3; ++i) {
        query.terms.push_back(std::string(1, static_cast<char>('a' + rng() % 14)));
      }
      queries.push_back(query);
    }
  }
};

std::vector<std::string> baseline_order(const RandomCorpus& corpus, const Query& q, double mu) {
  std::vector<std::pair<double, std::string>> scored;
  for (const auto& d : corpus.docs) scored.emplace_back(-dirichlet_ql(q, d, corpus.stats, mu), d.id);
  std::sort(scored.begin(), scored.end());
  std::vector<std::string> ids;
  for (const auto& [s, id] : scored) ids.push_back(id);
  return ids;
}

TEST(Rerank, KappaZeroKeepsBaselineOrderInBothModes) {
  for (unsigned seed = 0; seed < 10; ++seed) {
    RandomCorpus corpus(seed);
    for (const Query& q : corpus.queries) {
      RerankConfig single;
      single.kappa = 0.0;
      single.mu = 100.0;
      single.relation = RelationLabel::kElaboration;
      RerankConfig all = single;
      all.mode = RerankMode::kAllRelations;
      const auto expected = baseline_order(corpus, q, 100.0);
      EXPECT_EQ(order_of(rerank(q, corpus.candidates, corpus.stats, single)), expected);
      EXPECT_EQ(order_of(rerank(q, corpus.candidates, corpus.stats, all)), expected);
    }
  }
}

TEST(Rerank, MissingRelationEverywhereKeepsBaseline) {
  RandomCorpus corpus(4);
  for (auto& d : corpus.docs) d.spans.clear();
  RerankConfig config;
  config.kappa = 0.7;
  config.mu = 100.0;
  config.relation = RelationLabel::kContrast;
  for (const Query& q : corpus.queries) {
    EXPECT_EQ(order_of(rerank(q, corpus.candidates, corpus.stats, config)),
              baseline_order(corpus, q, 100.0));
  }
}

TEST(Rerank, OutputIsPermutationWithScoresInUnitInterval) {
  RandomCorpus corpus(7);
  for (RerankMode mode : {RerankMode::kSingleRelation, RerankMode::kAllRelations}) {
    RerankConfig config;
    config.kappa = 0.6;
    config.mu = 30.0;
    config.mode = mode;
    config.relation = RelationLabel::kAttribution;
    for (const Query& q : corpus.queries) {
      const auto ranked = rerank(q, corpus.candidates, corpus.stats, config);
      auto ids = order_of(ranked);
      std::sort(ids.begin(), ids.end());
      std::vector<std::string> all;
      for (const auto& d : corpus.docs) all.push_back(d.id);
      std::sort(all.begin(), all.end());
      EXPECT_EQ(ids, all);
      for (const auto& s : ranked) {
        EXPECT_TRUE(std::isfinite(s.final_score));
        EXPECT_GT(s.final_score, 0.0);
        EXPECT_LE(s.final_score, 1.0);
      }
    }
  }
}

TEST(RelationWeights, SumToOne) {
  RandomCorpus corpus(9);
  for (const auto& d : corpus.docs) {
    const auto weights = relation_weights(d, corpus.stats);
    if (weights.empty()) continue;
    double total = 0.0;
    for (const auto& [label, w] : weights) total += w;
    EXPECT_NEAR(total, 1.0, 1e-12);
  }
}

TEST(Retrieve, TopDepthWithIdTieBreak) {
  const std::vector<Document> docs{doc("b", "x y"), doc("a", "x y"), doc("c", "y y")};
  const Collection collection(docs);
  const CollectionStats stats = build_stats(docs);
  const auto ranked = retrieve(query("q", "x"), collection, stats, 10.0, 2);
  ASSERT_EQ(ranked.size(), 2u);
  EXPECT_EQ(ranked[0].doc_id, "a");
  EXPECT_EQ(ranked[1].doc_id, "b");
}

TEST(RerankConfig, Validation) {
  RerankConfig config;
  EXPECT_THROW(config.validate(), std::invalid_argument);  // no relation
  config.relation = RelationLabel::kContrast;
  EXPECT_NO_THROW(config.validate());
  config.kappa = 1.5;
  EXPECT_THROW(config.validate(), std::invalid_argument);
}

}  // namespace
}  // namespace rhetrank
