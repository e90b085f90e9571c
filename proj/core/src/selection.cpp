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

#include "rhetrank/selection.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <stdexcept>

#include "detail/text.hpp"
#include "rhetrank/parallel.hpp"
#include "rhetrank/random.hpp"

namespace rhetrank {
namespace {

constexpr double kDomainLow = 1e-8;
constexpr double kDomainHigh = 1e8;
constexpr double kGradientTolerance = 1e-10;
constexpr std::size_t kGridPoints = 512;
constexpr double kBetaSpanSds = 8.0;
constexpr double kLambdaSpanFactor = 8.0;
constexpr double kTieTolerance = 1e-9;
constexpr int kMaxNewtonIterations = 200;

const double kLogTwoPi = std::log(2.0 * std::numbers::pi);

double step_for(double x) { return std::min(1e-5 * std::max(1.0, x), 0.5 * x); }

// Safeguarded Newton for the root of an increasing-through-zero derivative
// inside [lo, hi] with d(lo) < 0 < d(hi).
template <typename D1, typename D2>
double newton_root(D1&& d1, D2&& d2, double lo, double hi, bool geometric) {
  double x = geometric ? std::sqrt(lo * hi) : 0.5 * (lo + hi);
  for (int iter = 0; iter < kMaxNewtonIterations; ++iter) {
    const double g = d1(x);
    if (std::abs(g) < kGradientTolerance) return x;
    if (g < 0) {
      lo = x;
    } else {
      hi = x;
    }
    const double curvature = d2(x);
    double next = x - g / curvature;
    if (!(curvature > 0) || !(next > lo && next < hi)) {
      next = (geometric && lo > 0 && hi / lo > 4.0) ? std::sqrt(lo * hi) : 0.5 * (lo + hi);
    }
    if (std::abs(next - x) <= 4 * std::numeric_limits<double>::epsilon() * std::abs(x)) {
      return next;
    }
    x = next;
  }
  return x;
}

void validate_observations(std::span<const Observation> obs) {
  if (obs.empty()) throw std::invalid_argument("no observations");
  std::set<RelationLabel> seen;
  for (const Observation& o : obs) {
    if (!(o.x > 0) || !std::isfinite(o.x)) {
      throw std::invalid_argument("observation exposure x must be positive");
    }
    if (!(o.y >= 0) || !std::isfinite(o.y)) {
      throw std::invalid_argument("observation score y must be non-negative");
    }
    if (!seen.insert(o.relation).second) {
      throw std::invalid_argument("relation '" + std::string(to_string(o.relation)) +
                                  "' observed more than once");
    }
  }
}

Density normalized(std::vector<double> grid, std::vector<double> values) {
  Density d{std::move(grid), std::move(values)};
  const double mass = d.integral();
  if (!(mass > 0) || !std::isfinite(mass)) {
    throw Error("posterior density could not be normalized");
  }
  for (double& v : d.values) v /= mass;
  return d;
}

}  // namespace

void Hyperparams::validate() const {
  if (!(alpha > 0) || !(nu > 0) || !(phi > 0)) {
    throw std::invalid_argument("hyperparameters alpha, nu, phi must be positive");
  }
}

LaplaceResult laplace_integral(const SmoothFunction& h) {
  if (!h.value) throw std::invalid_argument("laplace_integral: no function");
  auto d1 = [&](double x) {
    if (h.derivative) return h.derivative(x);
    const double e = step_for(x);
    return (h.value(x + e) - h.value(x - e)) / (2 * e);
  };
  auto d2 = [&](double x) {
    if (h.second_derivative) return h.second_derivative(x);
    const double e = step_for(x);
    return (h.value(x + e) - 2 * h.value(x) + h.value(x - e)) / (e * e);
  };

  // Bracket the first descent-to-ascent sign change on a log-spaced scan.
  constexpr int kScanPerDecade = 8;
  double lo = 0.0;
  double hi = 0.0;
  double previous_x = kDomainLow;
  double previous_d = d1(previous_x);
  for (int k = 1; k <= 16 * kScanPerDecade; ++k) {
    const double x = kDomainLow * std::pow(10.0, static_cast<double>(k) / kScanPerDecade);
    const double d = d1(x);
    if (previous_d < 0 && d >= 0) {
      lo = previous_x;
      hi = x;
      break;
    }
    previous_x = x;
    previous_d = d;
  }
  if (hi == 0.0) {
    throw NoInteriorModeError("h' has no sign change on (1e-8, 1e8)");
  }

  LaplaceResult result;
  result.mode = newton_root(d1, d2, lo, hi, /*geometric=*/true);
  result.curvature = d2(result.mode);
  if (!(result.curvature > 0)) {
    throw NoInteriorModeError("h'' is not positive at the stationary point");
  }
  result.log_value =
      -h.value(result.mode) + 0.5 * (kLogTwoPi - std::log(result.curvature));
  result.value = std::exp(result.log_value);
  return result;
}

double h_beta(double beta, std::span<const Observation> obs, const Hyperparams& hp) {
  if (!(beta > 0)) throw std::domain_error("h_beta: beta must be positive");
  return BetaExponent::marginal(obs, hp).value(beta);
}

BetaExponent BetaExponent::marginal(std::span<const Observation> obs,
                                    const Hyperparams& hp) {
  if (obs.empty()) throw std::invalid_argument("no observations");
  hp.validate();
  BetaExponent h;
  h.rate_ = hp.phi;
  h.power_ = static_cast<double>(obs.size()) * hp.alpha + hp.nu - 1.0;
  h.terms_.reserve(obs.size());
  for (const Observation& o : obs) h.terms_.emplace_back(o.x, o.y + hp.alpha);
  return h;
}

BetaExponent BetaExponent::conditional(std::span<const Observation> obs,
                                       const Hyperparams& hp, std::size_t j,
                                       double lambda) {
  if (j >= obs.size()) throw std::out_of_range("relation index out of range");
  BetaExponent h = marginal(obs, hp);
  h.rate_ += lambda;
  h.terms_.erase(h.terms_.begin() + static_cast<std::ptrdiff_t>(j));
  return h;
}

double BetaExponent::value(double beta) const {
  double v = rate_ * beta - power_ * std::log(beta);
  for (const auto& [x, w] : terms_) v += w * std::log(x + beta);
  return v;
}

double BetaExponent::derivative(double beta) const {
  double v = rate_ - power_ / beta;
  for (const auto& [x, w] : terms_) v += w / (x + beta);
  return v;
}

double BetaExponent::second_derivative(double beta) const {
  double v = power_ / (beta * beta);
  for (const auto& [x, w] : terms_) v -= w / ((x + beta) * (x + beta));
  return v;
}

SmoothFunction BetaExponent::as_function() const {
  return {[h = *this](double b) { return h.value(b); },
          [h = *this](double b) { return h.derivative(b); },
          [h = *this](double b) { return h.second_derivative(b); }};
}

std::array<double, 5> BetaExponent::log_scale_derivatives(double t) const {
  const double beta = std::exp(t);
  const double linear = rate_ * beta;
  std::array<double, 5> g{linear - (power_ + 1.0) * t, linear - (power_ + 1.0), linear,
                          linear, linear};
  for (const auto& [x, w] : terms_) {
    const double s = beta / (x + beta);
    const double s1 = s * (1.0 - s);
    g[0] += w * std::log(x + beta);
    g[1] += w * s;
    g[2] += w * s1;
    g[3] += w * s1 * (1.0 - 2.0 * s);
    g[4] += w * s1 * (1.0 - 6.0 * s + 6.0 * s * s);
  }
  return g;
}

double log_laplace_integral(const BetaExponent& h, LaplaceVariant variant) {
  if (variant == LaplaceVariant::kFirstOrder) {
    return laplace_integral(h.as_function()).log_value;
  }
  const double lo = std::log(kDomainLow);
  const double hi = std::log(kDomainHigh);
  auto d1 = [&](double t) { return h.log_scale_derivatives(t)[1]; };
  auto d2 = [&](double t) { return h.log_scale_derivatives(t)[2]; };
  if (!(d1(lo) < 0 && d1(hi) > 0)) {
    throw NoInteriorModeError("exponent has no interior minimum on (1e-8, 1e8)");
  }
  const double t = newton_root(d1, d2, lo, hi, /*geometric=*/false);
  const auto g = h.log_scale_derivatives(t);
  double correction =
      1.0 + 5.0 * g[3] * g[3] / (24.0 * g[2] * g[2] * g[2]) - g[4] / (8.0 * g[2] * g[2]);
  if (!(correction > 0)) correction = 1.0;
  return -g[0] + 0.5 * (kLogTwoPi - std::log(g[2])) + std::log(correction);
}

double Density::integral() const {
  double total = 0.0;
  for (std::size_t i = 1; i < grid.size(); ++i) {
    total += 0.5 * (values[i] + values[i - 1]) * (grid[i] - grid[i - 1]);
  }
  return total;
}

double Density::mean() const {
  double first = 0.0;
  for (std::size_t i = 1; i < grid.size(); ++i) {
    first += 0.5 * (grid[i] * values[i] + grid[i - 1] * values[i - 1]) *
             (grid[i] - grid[i - 1]);
  }
  return first / integral();
}

BetaPosterior posterior_beta(std::span<const Observation> obs,
                             const SelectionOptions& options) {
  validate_observations(obs);
  const BetaExponent h = BetaExponent::marginal(obs, options.hyper);
  const LaplaceResult laplace = laplace_integral(h.as_function());

  BetaPosterior posterior;
  posterior.mode = laplace.mode;
  posterior.log_integral = options.variant == LaplaceVariant::kFirstOrder
                               ? laplace.log_value
                               : log_laplace_integral(h, options.variant);
  const double sd = 1.0 / std::sqrt(laplace.curvature);
  const double upper = laplace.mode + kBetaSpanSds * sd;
  const double lower = std::max(laplace.mode - kBetaSpanSds * sd, laplace.mode * 1e-6);

  std::vector<double> grid(kGridPoints);
  std::vector<double> values(kGridPoints);
  for (std::size_t i = 0; i < kGridPoints; ++i) {
    grid[i] = lower + (upper - lower) * static_cast<double>(i) /
                          static_cast<double>(kGridPoints - 1);
    values[i] = std::exp(-h.value(grid[i]) - posterior.log_integral);
  }
  posterior.density = normalized(std::move(grid), std::move(values));
  return posterior;
}

PosteriorSummary posterior_lambda(std::size_t j, std::span<const Observation> obs,
                                  const SelectionOptions& options) {
  validate_observations(obs);
  if (j >= obs.size()) throw std::out_of_range("relation index out of range");
  const Hyperparams& hp = options.hyper;
  const Observation& target = obs[j];
  const double shape = target.y + hp.alpha;
  const double log_denominator =
      std::lgamma(shape) +
      log_laplace_integral(BetaExponent::marginal(obs, hp), options.variant);
  const double upper = kLambdaSpanFactor * shape / target.x;

  std::vector<double> grid(kGridPoints);
  std::vector<double> values(kGridPoints);
  for (std::size_t k = 0; k < kGridPoints; ++k) {
    const double lambda =
        upper * static_cast<double>(k + 1) / static_cast<double>(kGridPoints);
    const double log_numerator =
        (shape - 1.0) * std::log(lambda) - lambda * target.x +
        log_laplace_integral(BetaExponent::conditional(obs, hp, j, lambda),
                             options.variant);
    grid[k] = lambda;
    values[k] = std::exp(log_numerator - log_denominator);
  }

  PosteriorSummary summary;
  summary.relation = target.relation;
  Density raw{grid, values};
  summary.raw_mass = raw.integral();
  summary.density = normalized(std::move(grid), std::move(values));
  summary.lambda_mean = summary.density.mean();
  return summary;
}

Selection infer_optimal(std::span<const Observation> obs,
                        const SelectionOptions& options) {
  validate_observations(obs);
  Selection selection;
  selection.posteriors.resize(obs.size());
  parallel_for(obs.size(), [&](std::size_t j) {
    selection.posteriors[j] = posterior_lambda(j, obs, options);
  });

  std::vector<std::size_t> order(obs.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return obs[a].relation < obs[b].relation; });
  std::size_t best = order.front();
  for (std::size_t i : order) {
    const double mean = selection.posteriors[i].lambda_mean;
    const double best_mean = selection.posteriors[best].lambda_mean;
    if (mean > best_mean + kTieTolerance * std::abs(best_mean)) best = i;
  }
  selection.relation = obs[best].relation;
  return selection;
}

RelationLabel select_optimal(std::span<const Observation> obs,
                             const SelectionOptions& options) {
  return infer_optimal(obs, options).relation;
}

ScoreTable parse_observations(std::string_view text) {
  ScoreTable table;
  detail::for_each_line(text, [&](std::size_t line_no, std::string_view line) {
    if (detail::is_blank(line)) return;
    auto fields = detail::split_tabs(line);
    if (fields.size() != 3) {
      throw FormatError(line_no, "observation line needs '<relation><TAB><qid><TAB><score>'");
    }
    auto label = parse_relation(fields[0]);
    if (!label) {
      throw FormatError(line_no, "unknown relation label '" + std::string(fields[0]) + "'");
    }
    if (fields[1].empty()) throw FormatError(line_no, "empty query id");
    auto score = detail::parse_number<double>(fields[2]);
    if (!score || *score < 0) {
      throw FormatError(line_no, "score must be a non-negative number");
    }
    if (!table[*label].emplace(std::string(fields[1]), *score).second) {
      throw FormatError(line_no, "duplicate observation for query '" +
                                     std::string(fields[1]) + "'");
    }
  });
  return table;
}

std::string write_observations(const ScoreTable& table) {
  std::string out;
  for (const auto& [label, scores] : table) {
    for (const auto& [qid, score] : scores) {
      out += to_string(label);
      out += '\t';
      out += qid;
      out += '\t';
      out += detail::format_exact(score);
      out += '\n';
    }
  }
  return out;
}

std::vector<Observation> aggregate_observations(const ScoreTable& table,
                                                std::span<const std::string> queries) {
  std::vector<Observation> obs;
  for (const auto& [label, scores] : table) {
    Observation o{label, 0.0, 0.0};
    if (queries.empty()) {
      for (const auto& [qid, score] : scores) {
        o.x += 1.0;
        o.y += score;
      }
    } else {
      for (const std::string& qid : queries) {
        auto it = scores.find(qid);
        if (it == scores.end()) continue;
        o.x += 1.0;
        o.y += it->second;
      }
    }
    if (o.x > 0) obs.push_back(o);
  }
  return obs;
}

std::vector<PoolingRepeat> pooled_inference(std::span<const ScoreTable> query_sets,
                                            std::uint64_t seed, std::size_t repeats,
                                            const SelectionOptions& options) {
  if (query_sets.empty()) throw std::invalid_argument("no query sets to pool");
  std::vector<std::vector<std::string>> set_queries;
  for (const ScoreTable& table : query_sets) {
    std::set<std::string> ids;
    for (const auto& [label, scores] : table) {
      for (const auto& [qid, score] : scores) ids.insert(qid);
    }
    if (ids.empty()) throw std::invalid_argument("query set without observations");
    set_queries.emplace_back(ids.begin(), ids.end());
  }

  SeededRng rng(seed);
  std::vector<PoolingRepeat> result;
  result.reserve(repeats);
  for (std::size_t r = 0; r < repeats; ++r) {
    std::map<RelationLabel, Observation> pooled;
    for (std::size_t s = 0; s < query_sets.size(); ++s) {
      std::vector<std::string> sample = set_queries[s];
      rng.shuffle(sample);
      sample.resize((sample.size() + 1) / 2);
      for (const Observation& o : aggregate_observations(query_sets[s], sample)) {
        auto [it, inserted] = pooled.try_emplace(o.relation, o);
        if (!inserted) {
          it->second.x += o.x;
          it->second.y += o.y;
        }
      }
    }
    PoolingRepeat repeat;
    for (const auto& [label, o] : pooled) repeat.observations.push_back(o);
    repeat.selection = infer_optimal(repeat.observations, options);
    result.push_back(std::move(repeat));
  }
  return result;
}

}  // namespace rhetrank
