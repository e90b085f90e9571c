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
#include <string>
#include <vector>

#include "rhetrank/corpus.hpp"
#include "rhetrank/relation.hpp"

namespace rhetrank {

/// Shape of a generated test collection. Every query owns two unique terms
/// and three kinds of judged documents:
///
///  - relevant: the query terms sit inside a span of `seeded_relation`;
///  - distractors: the terms occur more often, but inside a span of some other
///    relation, so the first-stage ranking prefers them;
///  - decoys: a long document whose only occurrence of the terms is a tiny
///    `seeded_relation` span, which wins when kappa is too large.
///
/// Background documents hold no query terms. Every document carries one span
/// of the seeded relation plus spans of other relations.
struct SyntheticSpec {
  std::size_t num_queries = 50;
  std::size_t background_documents = 100;
  std::size_t background_vocabulary = 50;
  RelationLabel seeded_relation = RelationLabel::kContrast;
  std::uint64_t seed = 1;
  std::string query_prefix = "q";

  std::size_t relevant_per_query = 3;
  std::size_t relevant_length = 40;
  std::size_t relevant_span = 20;
  std::size_t relevant_term_count = 1;

  std::size_t distractors_per_query = 3;
  std::size_t distractor_length = 60;
  std::size_t distractor_term_count = 2;

  std::size_t decoys_per_query = 3;
  std::size_t decoy_length = 80;

  std::size_t background_length = 60;
};

struct SyntheticCollection {
  std::vector<Document> documents;  // spans attached
  std::vector<Query> queries;
  Judgments judgments;
};

/// Deterministic in `spec`. Document ids are assigned after a seeded shuffle
/// so that id order carries no relevance signal.
SyntheticCollection generate_synthetic(const SyntheticSpec& spec);

/// `<docid><TAB><text>` lines whose re-tokenization reproduces the tokens and
/// spans of the generated documents exactly.
std::string write_documents(const std::vector<Document>& documents);

}  // namespace rhetrank
