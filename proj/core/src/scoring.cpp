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

#include "rhetrank/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string_view>
#include <unordered_map>

namespace rhetrank {
namespace {

// Occurrences of each distinct query term in `tokens`, index-aligned with
// query.terms.
std::vector<std::size_t> query_term_counts(const Query& query,
                                           std::span<const std::string> tokens) {
  std::vector<std::size_t> counts(query.terms.size(), 0);
  for (const std::string& token : tokens) {
    for (std::size_t i = 0; i < query.terms.size(); ++i) {
      if (query.terms[i] == token) ++counts[i];
    }
  }
  return counts;
}

bool ranks_before(const ScoredDoc& a, const ScoredDoc& b) {
  if (a.final_score != b.final_score) return a.final_score > b.final_score;
  if (a.baseline_score != b.baseline_score) return a.baseline_score > b.baseline_score;
  return a.doc_id < b.doc_id;
}

}  // namespace

void RerankConfig::validate() const {
  if (!(kappa >= 0.0 && kappa <= 1.0)) {
    throw std::invalid_argument("kappa must lie in [0, 1]");
  }
  if (!(mu > 0.0) || !std::isfinite(mu)) {
    throw std::invalid_argument("mu must be positive");
  }
  if (mode == RerankMode::kSingleRelation && !relation) {
    throw std::invalid_argument("single-relation mode requires a relation");
  }
}

double dirichlet_ql(const Query& query, const Document& doc,
                    const CollectionStats& stats, double mu) {
  const std::vector<std::size_t> counts = query_term_counts(query, doc.tokens);
  const double denominator = static_cast<double>(doc.length()) + mu;
  double log_likelihood = 0.0;
  for (std::size_t i = 0; i < query.terms.size(); ++i) {
    const double p_collection = stats.collection_probability(query.terms[i]);
    log_likelihood +=
        std::log((static_cast<double>(counts[i]) + mu * p_collection) / denominator);
  }
  return log_likelihood;
}

double normalized_ql(double log_likelihood, std::size_t query_len) {
  if (query_len == 0) throw std::invalid_argument("query length must be positive");
  return std::exp(log_likelihood / static_cast<double>(query_len));
}

double p_q_given_psi(const Query& query, std::span<const std::string> psi_tokens,
                     const CollectionStats& stats) {
  if (psi_tokens.empty()) throw std::invalid_argument("empty relation text");
  const std::vector<std::size_t> counts = query_term_counts(query, psi_tokens);
  const double denominator =
      static_cast<double>(psi_tokens.size() + stats.vocabulary_size());
  double log_p = 0.0;
  for (std::size_t count : counts) {
    log_p += std::log((static_cast<double>(count) + 1.0) / denominator);
  }
  return log_p;
}

double p_psi_given_d(std::span<const std::string> psi_tokens, const Document& doc,
                     const CollectionStats& stats) {
  std::unordered_map<std::string_view, std::size_t> doc_counts;
  for (const std::string& token : doc.tokens) ++doc_counts[token];
  const double denominator = static_cast<double>(doc.length() + stats.vocabulary_size());
  double log_p = 0.0;
  for (const std::string& token : psi_tokens) {
    auto it = doc_counts.find(token);
    const double f = it == doc_counts.end() ? 0.0 : static_cast<double>(it->second);
    log_p += std::log((f + 1.0) / denominator);
  }
  return log_p;
}

double mixture_score(const Query& query, const Document& doc,
                     std::span<const std::string> psi_tokens,
                     const CollectionStats& stats, double kappa, double mu) {
  const std::size_t len = query.terms.size();
  const double baseline = normalized_ql(dirichlet_ql(query, doc, stats, mu), len);
  const double relation = normalized_ql(p_q_given_psi(query, psi_tokens, stats), len);
  return (1.0 - kappa) * baseline + kappa * relation;
}

std::vector<std::pair<RelationLabel, double>> relation_weights(
    const Document& doc, const CollectionStats& stats) {
  std::vector<std::pair<RelationLabel, double>> weights;
  double total = 0.0;
  for (RelationLabel label : kAllRelations) {
    const std::vector<std::string> psi = relation_text(doc, label);
    if (psi.empty()) continue;
    const double w = normalized_ql(p_psi_given_d(psi, doc, stats), psi.size());
    weights.emplace_back(label, w);
    total += w;
  }
  for (auto& [label, w] : weights) w /= total;
  return weights;
}

std::vector<ScoredDoc> retrieve(const Query& query, const Collection& collection,
                                const CollectionStats& stats, double mu,
                                std::size_t depth) {
  std::vector<ScoredDoc> scored;
  scored.reserve(collection.size());
  for (const Document& doc : collection) {
    const double ll = dirichlet_ql(query, doc, stats, mu);
    scored.push_back({doc.id, ll, ll});
  }
  const std::size_t keep = std::min(depth, scored.size());
  std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(keep),
                    scored.end(), ranks_before);
  scored.resize(keep);
  return scored;
}

std::vector<ScoredDoc> rerank(const Query& query,
                              std::span<const Document* const> candidates,
                              const CollectionStats& stats, const RerankConfig& config) {
  config.validate();
  const std::size_t len = query.terms.size();
  std::vector<ScoredDoc> scored;
  scored.reserve(candidates.size());
  for (const Document* doc : candidates) {
    const double ll = dirichlet_ql(query, *doc, stats, config.mu);
    const double baseline = normalized_ql(ll, len);
    double final_score = baseline;
    if (config.mode == RerankMode::kSingleRelation) {
      const std::vector<std::string> psi = relation_text(*doc, *config.relation);
      if (!psi.empty()) {
        const double relation = normalized_ql(p_q_given_psi(query, psi, stats), len);
        final_score = (1.0 - config.kappa) * baseline + config.kappa * relation;
        if (config.span_weight) {
          final_score *= normalized_ql(p_psi_given_d(psi, *doc, stats), psi.size());
        }
      }
    } else {
      // sum_g w_g * mixture_g with sum_g w_g = 1, rearranged so that kappa = 0
      // returns the baseline bit for bit.
      double shift = 0.0;
      for (const auto& [label, w] : relation_weights(*doc, stats)) {
        const double relation =
            normalized_ql(p_q_given_psi(query, relation_text(*doc, label), stats), len);
        shift += w * (relation - baseline);
      }
      final_score = baseline + config.kappa * shift;
    }
    scored.push_back({doc->id, ll, final_score});
  }
  std::sort(scored.begin(), scored.end(), ranks_before);
  return scored;
}

Run to_run(const std::string& query_id, std::span<const ScoredDoc> ranked,
           const std::string& tag, bool use_final) {
  Run run;
  run.reserve(ranked.size());
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    run.push_back({query_id, ranked[i].doc_id, i + 1,
                   use_final ? ranked[i].final_score : ranked[i].baseline_score, tag});
  }
  return run;
}

}  // namespace rhetrank
