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

// Independent reference implementations used to check the library: textbook
// retrieval metrics written as direct loops over the definitions, and
// numerical quadrature of the Poisson-gamma posterior with Boost.Math.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "rhetrank/selection.hpp"

namespace rhetrank::oracle {

using Grades = std::map<std::string, int>;

inline bool is_relevant(const Grades& g, const std::string& doc) {
  auto it = g.find(doc);
  return it != g.end() && it->second > 0;
}

inline bool is_judged_nonrelevant(const Grades& g, const std::string& doc) {
  auto it = g.find(doc);
  return it != g.end() && it->second <= 0;
}

/// Mean of precision@k over the ranks k holding relevant documents, divided
/// by the total number of relevant documents.
inline double average_precision(const std::vector<std::string>& ranking, const Grades& g) {
  int total_relevant = 0;
  for (const auto& kv : g) total_relevant += kv.second > 0 ? 1 : 0;
  double sum = 0.0;
  for (std::size_t k = 1; k <= ranking.size(); ++k) {
    if (!is_relevant(g, ranking[k - 1])) continue;
    int relevant_in_top_k = 0;
    for (std::size_t i = 0; i < k; ++i) relevant_in_top_k += is_relevant(g, ranking[i]) ? 1 : 0;
    sum += static_cast<double>(relevant_in_top_k) / static_cast<double>(k);
  }
  return sum / total_relevant;
}

/// Buckley & Voorhees bpref with the trec_eval min(R, N) denominator.
inline double bpref(const std::vector<std::string>& ranking, const Grades& g) {
  double r = 0, n = 0;
  for (const auto& kv : g) (kv.second > 0 ? r : n) += 1;
  double sum = 0.0;
  for (std::size_t k = 0; k < ranking.size(); ++k) {
    if (!is_relevant(g, ranking[k])) continue;
    if (n == 0) {
      sum += 1.0;
      continue;
    }
    double above = 0;
    for (std::size_t i = 0; i < k; ++i) above += is_judged_nonrelevant(g, ranking[i]) ? 1 : 0;
    sum += 1.0 - std::min(above, r) / std::min(r, n);
  }
  return sum / r;
}

/// DCG with gain 2^g - 1 and discount log2(rank + 1), normalized by the DCG of
/// the best possible ranking of the same length.
inline double ndcg(const std::vector<std::string>& ranking, const Grades& g) {
  auto dcg = [](const std::vector<int>& grades) {
    double total = 0.0;
    for (std::size_t i = 0; i < grades.size(); ++i) {
      total += (std::pow(2.0, grades[i]) - 1.0) / std::log2(static_cast<double>(i) + 2.0);
    }
    return total;
  };
  std::vector<int> actual;
  for (const auto& doc : ranking) {
    auto it = g.find(doc);
    actual.push_back(it == g.end() ? 0 : std::max(it->second, 0));
  }
  std::vector<int> best;
  for (const auto& kv : g) best.push_back(std::max(kv.second, 0));
  std::sort(best.rbegin(), best.rend());
  if (best.size() > ranking.size()) best.resize(ranking.size());
  return dcg(actual) / dcg(best);
}

// ---------------------------------------------------------------------------
// Poisson-gamma quadrature.

/// Log of the integrand of the beta marginal, written out directly from the
/// model: the prior on beta times the gamma-Poisson marginal of every relation
/// (skipping `skip`) with the rate of relation `skip` fixed at `lambda`.
inline double log_beta_integrand(double beta, const std::vector<Observation>& obs,
                                 const Hyperparams& hp, std::size_t skip = SIZE_MAX,
                                 double lambda = 0.0) {
  const double n = static_cast<double>(obs.size());
  double value = -(hp.phi + lambda) * beta + (n * hp.alpha + hp.nu - 1.0) * std::log(beta);
  for (std::size_t i = 0; i < obs.size(); ++i) {
    if (i == skip) continue;
    value -= (obs[i].y + hp.alpha) * std::log(obs[i].x + beta);
  }
  return value;
}

/// Adaptive Gauss-Kronrod integral of exp(f(t) - shift) over [lo, hi].
template <typename F>
double integrate(F f, double lo, double hi) {
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, lo, hi, 20, 1e-11);
}

/// Largest value of f on a log-spaced scan of [lo, hi]; used as a shift so
/// that exponentials stay in range.
template <typename F>
double scan_max(F f, double lo, double hi) {
  double best = -std::numeric_limits<double>::infinity();
  for (int k = 0; k <= 4000; ++k) {
    const double x = lo * std::pow(hi / lo, k / 4000.0);
    best = std::max(best, f(x));
  }
  return best;
}

/// log of the integral of exp(-h(beta)) over (1e-6, 1e4), integrated over
/// log beta.
inline double log_marginal(const std::vector<Observation>& obs, const Hyperparams& hp) {
  auto f = [&](double beta) { return log_beta_integrand(beta, obs, hp); };
  const double shift = scan_max(f, 1e-6, 1e4);
  const double integral = integrate(
      [&](double t) { return std::exp(f(std::exp(t)) - shift + t); }, std::log(1e-6),
      std::log(1e4));
  return shift + std::log(integral);
}

/// Posterior mean of beta by 1-D quadrature.
inline double beta_mean(const std::vector<Observation>& obs, const Hyperparams& hp) {
  auto f = [&](double beta) { return log_beta_integrand(beta, obs, hp); };
  const double shift = scan_max(f, 1e-6, 1e4);
  auto w = [&](double t) { return std::exp(f(std::exp(t)) - shift + t); };
  const double lo = std::log(1e-6), hi = std::log(1e4);
  return integrate([&](double t) { return std::exp(t) * w(t); }, lo, hi) / integrate(w, lo, hi);
}

/// Posterior mean of lambda_j by brute-force double quadrature over
/// (lambda_j, beta) of the joint density
///   beta^(n alpha + nu - 1) e^(-phi beta) lambda^(y_j + alpha - 1)
///   e^(-lambda (x_j + beta)) prod_{i != j} (x_i + beta)^-(y_i + alpha).
inline double lambda_mean(const std::vector<Observation>& obs, std::size_t j,
                          const Hyperparams& hp) {
  const double a = obs[j].y + hp.alpha;
  auto log_joint = [&](double lambda, double beta) {
    return log_beta_integrand(beta, obs, hp, j, lambda) + (a - 1.0) * std::log(lambda) -
           lambda * obs[j].x;
  };
  // Shift by the joint maximum located on a coarse log grid.
  double shift = -std::numeric_limits<double>::infinity();
  for (int u = 0; u <= 200; ++u) {
    const double lambda = 1e-6 * std::pow(1e10, u / 200.0);
    for (int v = 0; v <= 200; ++v) {
      const double beta = 1e-6 * std::pow(1e10, v / 200.0);
      shift = std::max(shift, log_joint(lambda, beta));
    }
  }
  const double lo = std::log(1e-6), hi = std::log(1e4);
  auto inner = [&](double beta, int power) {
    return integrate(
        [&](double s) {
          const double lambda = std::exp(s);
          return std::pow(lambda, power) * std::exp(log_joint(lambda, beta) - shift + s);
        },
        std::log(1e-10), std::log(1e4));
  };
  auto outer = [&](int power) {
    return integrate(
        [&](double t) {
          const double beta = std::exp(t);
          return inner(beta, power) * beta;
        },
        lo, hi);
  };
  return outer(1) / outer(0);
}

}  // namespace rhetrank::oracle
