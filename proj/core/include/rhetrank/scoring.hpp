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

#include <optional>
#include <utility>
#include <span>
#include <string>
#include <vector>

#include "rhetrank/corpus.hpp"
#include "rhetrank/index.hpp"
#include "rhetrank/relation.hpp"

namespace rhetrank {

enum class RerankMode : unsigned char {
  kSingleRelation,
  kAllRelations,
};

struct RerankConfig {
  double kappa = 0.5;
  double mu = 2000.0;
  RerankMode mode = RerankMode::kSingleRelation;
  std::optional<RelationLabel> relation;  // required in single-relation mode
  /// Multiply the single-relation mixture by the span weight p(psi|d).
  bool span_weight = false;

  /// Throws std::invalid_argument when kappa is outside [0,1], mu <= 0, or a
  /// single-relation config lacks its relation.
  void validate() const;
};

struct ScoredDoc {
  std::string doc_id;
  double baseline_score = 0.0;  // Dirichlet query log-likelihood
  double final_score = 0.0;
};

/// Dirichlet-smoothed query log-likelihood:
///   sum_i log((f(q_i, d) + mu * p(q_i | C)) / (|d| + mu)).
double dirichlet_ql(const Query& query, const Document& doc,
                    const CollectionStats& stats, double mu);

/// Per-term geometric mean exp(log_likelihood / query_len), in (0, 1].
double normalized_ql(double log_likelihood, std::size_t query_len);

/// Add-one smoothed log p(q | psi) = sum_i log((f(q_i, psi) + 1) / (|psi| + V)).
/// Throws std::invalid_argument on an empty psi.
double p_q_given_psi(const Query& query, std::span<const std::string> psi_tokens,
                     const CollectionStats& stats);

/// Add-one smoothed log p(psi | d) = sum_j log((f(psi_j, d) + 1) / (|d| + V)).
double p_psi_given_d(std::span<const std::string> psi_tokens, const Document& doc,
                     const CollectionStats& stats);

/// (1 - kappa) * normalized baseline + kappa * normalized p(q | psi).
double mixture_score(const Query& query, const Document& doc,
                     std::span<const std::string> psi_tokens,
                     const CollectionStats& stats, double kappa, double mu);

/// Normalized p(psi_g | d) for every label present in the document; the
/// weights sum to one. Empty when the document has no spans.
std::vector<std::pair<RelationLabel, double>> relation_weights(
    const Document& doc, const CollectionStats& stats);

/// Exhaustive first-stage ranking by dirichlet_ql, best `depth` documents.
/// Ties are ordered by ascending document id. final_score == baseline_score.
std::vector<ScoredDoc> retrieve(const Query& query, const Collection& collection,
                                const CollectionStats& stats, double mu,
                                std::size_t depth);

/// Re-scores candidates with the relation-conditioned mixture.
///
/// Single-relation mode mixes in the text of the document's spans labeled
/// with the configured relation; documents without such spans keep their
/// normalized baseline. All-relations mode averages the mixture over every
/// label present in the document, weighted by p(psi_g | d) normalized to sum
/// to one. Output is sorted by final score, then baseline score, then
/// ascending document id.
std::vector<ScoredDoc> rerank(const Query& query,
                              std::span<const Document* const> candidates,
                              const CollectionStats& stats, const RerankConfig& config);

/// Converts a ranked list into run entries for one query.
/// `use_final` selects final_score over baseline_score.
Run to_run(const std::string& query_id, std::span<const ScoredDoc> ranked,
           const std::string& tag, bool use_final = true);

}  // namespace rhetrank
