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

#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "rhetrank/corpus.hpp"
#include "rhetrank/discourse.hpp"
#include "rhetrank/error.hpp"
#include "test_util.hpp"

namespace rhetrank {
namespace {

using testing::doc;

const std::vector<CueRule> kAlthough{{{"although"}, RelationLabel::kContrast,
                                      CueScope::kClauseAfterCue}};

TEST(HeuristicTag, ClauseAfterCueRunsToDocumentEnd) {
  const auto spans = heuristic_tag(doc("d", "although it rained we went"), kAlthough);
  ASSERT_EQ(spans.size(), 1u);
  // No punctuation: the clause extends over the remaining tokens.
  EXPECT_EQ(spans[0], (DiscourseSpan{RelationLabel::kContrast, 0, 5}));
}

TEST(HeuristicTag, ClauseEndsAtComma) {
  const auto spans =
      heuristic_tag(make_document("d", "Although it rained, we went"), kAlthough);
  ASSERT_EQ(spans.size(), 1u);
  EXPECT_EQ(spans[0], (DiscourseSpan{RelationLabel::kContrast, 0, 3}));
}

TEST(HeuristicTag, NoCueNoSpans) {
  EXPECT_TRUE(heuristic_tag(doc("d", "the cat sat"), default_cue_rules()).empty());
}

TEST(HeuristicTag, TwoBecauseCuesGiveDisjointSpans) {
  const auto spans = heuristic_tag(
      make_document("d", "We left because it rained because the sky was dark"),
      default_cue_rules());
  std::vector<DiscourseSpan> explanation;
  for (const auto& s : spans) {
    if (s.relation == RelationLabel::kExplanation) explanation.push_back(s);
  }
  ASSERT_EQ(explanation.size(), 2u);
  EXPECT_EQ(explanation[0], (DiscourseSpan{RelationLabel::kExplanation, 2, 5}));
  EXPECT_EQ(explanation[1], (DiscourseSpan{RelationLabel::kExplanation, 5, 10}));
}

TEST(HeuristicTag, ClauseBeforeCue) {
  const std::vector<CueRule> rules{
      {{"as", "a", "result"}, RelationLabel::kCauseResult, CueScope::kClauseBeforeCue}};
  const auto spans =
      heuristic_tag(make_document("d", "It was late. It rained as a result"), rules);
  ASSERT_EQ(spans.size(), 1u);
  EXPECT_EQ(spans[0], (DiscourseSpan{RelationLabel::kCauseResult, 3, 8}));
}

TEST(HeuristicTag, FuzzedOutputSatisfiesSpanInvariants) {
  std::vector<std::string> words{"although", "because", "but", "if", "however", "the",
                                 "rain",     "we",      "so",  "then", "in", "order", "to"};
  const std::vector<std::string> punct{"", "", "", ",", ".", ";"};
  std::mt19937 rng(3);
  for (int trial = 0; trial < 300; ++trial) {
    std::string text;
    for (int i = 0; i < 30; ++i) {
      text += words[rng() % words.size()] + punct[rng() % punct.size()] + ' ';
    }
    Document d = make_document("d", text);
    d.spans = heuristic_tag(d, default_cue_rules());
    EXPECT_NO_THROW(validate_spans(d)) << text;
    EXPECT_TRUE(std::is_sorted(d.spans.begin(), d.spans.end()));
  }
}

TEST(CueRules, RoundTrip) {
  const std::string text = write_cue_rules(default_cue_rules());
  const auto parsed = parse_cue_rules(text);
  EXPECT_EQ(parsed.size(), default_cue_rules().size());
  EXPECT_EQ(write_cue_rules(parsed), text);
}

TEST(CueRules, BadScopeIsError) {
  EXPECT_THROW(parse_cue_rules("but\tcontrast\tsideways\n"), FormatError);
}

TEST(Distribution, Percentages) {
  const DiscourseSpan e1{RelationLabel::kElaboration, 0, 1};
  const DiscourseSpan e2{RelationLabel::kElaboration, 1, 2};
  const DiscourseSpan e3{RelationLabel::kElaboration, 2, 3};
  const DiscourseSpan c{RelationLabel::kContrast, 0, 3};
  const std::vector<Document> docs{doc("a", "x y z", {c, e1, e2}), doc("b", "x y z", {e3})};
  const auto dist = relation_distribution(docs);
  ASSERT_EQ(dist.size(), 2u);
  EXPECT_DOUBLE_EQ(dist.at(RelationLabel::kElaboration), 75.0);
  EXPECT_DOUBLE_EQ(dist.at(RelationLabel::kContrast), 25.0);
}

TEST(Distribution, SingleSpan) {
  const std::vector<Document> docs{doc("a", "x", {{RelationLabel::kSummary, 0, 1}})};
  EXPECT_DOUBLE_EQ(relation_distribution(docs).at(RelationLabel::kSummary), 100.0);
}

TEST(Distribution, NoAnnotationsIsError) {
  const std::vector<Document> docs{doc("a", "x y")};
  EXPECT_THROW(relation_distribution(docs), Error);
}

TEST(Distribution, SumsToHundred) {
  std::mt19937 rng(8);
  std::vector<Document> docs;
  for (int i = 0; i < 40; ++i) {
    Document d = doc("d" + std::to_string(i), "a b c d e f g h");
    d.spans.push_back({kAllRelations[rng() % kNumRelations], 0, 1 + rng() % 8});
    docs.push_back(d);
  }
  double total = 0.0;
  for (const auto& [label, pct] : relation_distribution(docs)) {
    EXPECT_GE(pct, 0.0);
    total += pct;
  }
  EXPECT_NEAR(total, 100.0, 1e-9);
}

}  // namespace
}  // namespace rhetrank
