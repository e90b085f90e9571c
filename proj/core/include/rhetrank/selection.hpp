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

// Bayesian choice of the rhetorical relation with the highest expected
// retrieval score.
//
// Per relation j, the summed retrieval score y_j over x_j queries is modeled
// as Poisson(lambda_j * x_j), with lambda_j ~ Gamma(alpha, beta) and
// beta ~ Gamma(nu, phi). Integrating out the rates leaves one-dimensional
// integrals over beta of exp(-h(beta)), where
//
//   h(beta) = phi*beta - (n*alpha + nu - 1) log beta
//             + sum_j (y_j + alpha) log(x_j + beta),
//
// which are evaluated with Laplace's method. The posterior of lambda_j is a
// ratio of two such integrals evaluated along a grid of lambda_j values.

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rhetrank/error.hpp"
#include "rhetrank/relation.hpp"

namespace rhetrank {

struct Observation {
  RelationLabel relation;
  double x = 1.0;  // exposure, e.g. number of queries
  double y = 0.0;  // summed retrieval score
};

struct Hyperparams {
  double alpha = 1.8;
  double nu = 0.1;
  double phi = 1.0;

  void validate() const;
};

/// Thrown when the exponent has no interior minimum on (1e-8, 1e8).
class NoInteriorModeError : public Error {
 public:
  using Error::Error;
};

/// A smooth function of one positive variable. Missing derivatives are
/// approximated by central differences.
struct SmoothFunction {
  std::function<double(double)> value;
  std::function<double(double)> derivative;
  std::function<double(double)> second_derivative;
};

struct LaplaceResult {
  double value = 0.0;      // approximation of the integral of exp(-h)
  double log_value = 0.0;  // its logarithm, safe from underflow
  double mode = 0.0;       // minimizer of h
  double curvature = 0.0;  // h'' at the mode
};

/// First-order Laplace approximation of the integral of exp(-h) over (0, inf):
/// exp(-h(m)) * sqrt(2 pi / h''(m)) at the minimizer m, found by safeguarded
/// Newton iteration on h' (bisection fallback) to |h'| < 1e-10.
LaplaceResult laplace_integral(const SmoothFunction& h);

/// h(beta) for the marginal likelihood of the observations.
/// Throws std::domain_error unless beta > 0, std::invalid_argument on empty obs.
double h_beta(double beta, std::span<const Observation> obs, const Hyperparams& hp);

/// The exponent shared by h and the per-relation h_j:
///   rate*beta - power*log(beta) + sum_i weight_i * log(x_i + beta).
class BetaExponent {
 public:
  /// h(beta).
  static BetaExponent marginal(std::span<const Observation> obs, const Hyperparams& hp);
  /// h_j(beta) at a fixed lambda_j: the rate grows by lambda_j and relation j
  /// drops out of the sum.
  static BetaExponent conditional(std::span<const Observation> obs, const Hyperparams& hp,
                                  std::size_t j, double lambda);

  double value(double beta) const;
  double derivative(double beta) const;
  double second_derivative(double beta) const;
  SmoothFunction as_function() const;

  /// Derivatives 0..4 of g(t) = h(e^t) - t, the exponent of the same integral
  /// written over t = log beta.
  std::array<double, 5> log_scale_derivatives(double t) const;

 private:
  double rate_ = 0.0;
  double power_ = 0.0;
  std::vector<std::pair<double, double>> terms_;  // (x_i, y_i + alpha)
};

enum class LaplaceVariant : unsigned char {
  /// exp(-h) sqrt(2 pi / h'') at the mode in beta.
  kFirstOrder,
  /// Laplace over t = log beta with the second-order correction
  /// 1 + 5 g3^2 / (24 g2^3) - g4 / (8 g2^2).
  kLogScaleCorrected,
};

/// log of the integral of exp(-h(beta)) over (0, inf).
double log_laplace_integral(const BetaExponent& h, LaplaceVariant variant);

struct SelectionOptions {
  Hyperparams hyper;
  LaplaceVariant variant = LaplaceVariant::kLogScaleCorrected;
};

/// Tabulated density on an ascending grid.
struct Density {
  std::vector<double> grid;
  std::vector<double> values;

  double integral() const;  // trapezoid rule
  double mean() const;      // trapezoid rule, normalized
};

struct BetaPosterior {
  double mode = 0.0;
  double log_integral = 0.0;  // log of the Laplace-approximated normalizer
  Density density;            // 512 points over mode +- 8 sd, clipped to beta > 0
};

/// Posterior of beta, exp(-h) normalized by its Laplace integral and then
/// renormalized on the grid.
BetaPosterior posterior_beta(std::span<const Observation> obs,
                             const SelectionOptions& options = {});

struct PosteriorSummary {
  RelationLabel relation;
  double lambda_mean = 0.0;
  /// Trapezoid mass of the Laplace-ratio density before renormalization.
  double raw_mass = 0.0;
  Density density;  // 512 points over (0, 8 (y_j + alpha) / x_j]
};

/// Posterior of the rate of observations[j].relation.
PosteriorSummary posterior_lambda(std::size_t j, std::span<const Observation> obs,
                                  const SelectionOptions& options = {});

struct Selection {
  RelationLabel relation;
  std::vector<PosteriorSummary> posteriors;  // one per observation, same order
};

/// Relation with the largest posterior mean rate. Means equal to within 1e-9
/// relative are tied and resolved toward the lexicographically smallest label.
/// Throws std::invalid_argument on empty input or repeated relations.
Selection infer_optimal(std::span<const Observation> obs,
                        const SelectionOptions& options = {});
RelationLabel select_optimal(std::span<const Observation> obs,
                             const SelectionOptions& options = {});

/// Per-query scores of one query set: relation -> query id -> score.
using ScoreTable = std::map<RelationLabel, std::map<std::string, double>>;

/// `<relation><TAB><qid><TAB><score>` lines. Scores must be finite and >= 0;
/// a (relation, qid) pair may appear once.
ScoreTable parse_observations(std::string_view text);
std::string write_observations(const ScoreTable& table);

/// x = number of listed queries scored for the relation, y = their score sum.
/// An empty `queries` span means every query in the table.
std::vector<Observation> aggregate_observations(const ScoreTable& table,
                                                std::span<const std::string> queries = {});

struct PoolingRepeat {
  std::vector<Observation> observations;
  Selection selection;
};

/// Repeated random pooling: each repeat draws half of the queries (rounded up)
/// from every query set, aggregates them per relation and runs
/// infer_optimal. Draws come from one mt19937_64 seeded with `seed`.
std::vector<PoolingRepeat> pooled_inference(std::span<const ScoreTable> query_sets,
                                            std::uint64_t seed, std::size_t repeats = 5,
                                            const SelectionOptions& options = {});

}  // namespace rhetrank
