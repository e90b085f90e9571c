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

#include "rhetrank/discourse.hpp"

#include <algorithm>
#include <array>

#include "detail/text.hpp"
#include "rhetrank/error.hpp"

namespace rhetrank {
namespace {

struct CueMatch {
  std::size_t start;
  std::size_t end;
  const CueRule* rule;
};

bool matches_at(const std::vector<std::string>& tokens, std::size_t pos,
                const std::vector<std::string>& cue) {
  if (pos + cue.size() > tokens.size()) return false;
  return std::equal(cue.begin(), cue.end(), tokens.begin() + pos);
}

std::vector<CueMatch> find_cues(const Document& doc,
                                std::span<const CueRule> rules) {
  std::vector<CueMatch> matches;
  std::size_t pos = 0;
  while (pos < doc.tokens.size()) {
    const CueRule* best = nullptr;
    for (const CueRule& rule : rules) {
      if (rule.cue.empty() || !matches_at(doc.tokens, pos, rule.cue)) continue;
      if (best == nullptr || rule.cue.size() > best->cue.size()) best = &rule;
    }
    if (best != nullptr) {
      matches.push_back({pos, pos + best->cue.size(), best});
      pos += best->cue.size();
    } else {
      ++pos;
    }
  }
  return matches;
}

bool ends_clause(const Document& doc, std::size_t i) {
  return i < doc.boundaries.size() && doc.boundaries[i] != Boundary::kNone;
}

}  // namespace

std::string_view to_string(CueScope scope) noexcept {
  return scope == CueScope::kClauseAfterCue ? "clause-after-cue"
                                            : "clause-before-cue";
}

const std::vector<CueRule>& default_cue_rules() {
  using R = RelationLabel;
  constexpr auto kAfter = CueScope::kClauseAfterCue;
  constexpr auto kBefore = CueScope::kClauseBeforeCue;
  static const std::vector<CueRule> rules = {
      {{"because"}, R::kExplanation, kAfter},
      {{"since"}, R::kExplanation, kAfter},
      {{"although"}, R::kContrast, kAfter},
      {{"though"}, R::kContrast, kAfter},
      {{"but"}, R::kContrast, kAfter},
      {{"however"}, R::kContrast, kAfter},
      {{"whereas"}, R::kComparison, kAfter},
      {{"than"}, R::kComparison, kAfter},
      {{"if"}, R::kCondition, kAfter},
      {{"unless"}, R::kCondition, kAfter},
      {{"when"}, R::kTemporal, kAfter},
      {{"before"}, R::kTemporal, kAfter},
      {{"after"}, R::kTemporal, kAfter},
      {{"in", "order", "to"}, R::kEnablement, kAfter},
      {{"so", "that"}, R::kEnablement, kAfter},
      {{"said"}, R::kAttribution, kBefore},
      {{"according", "to"}, R::kAttribution, kAfter},
      {{"therefore"}, R::kConsequence, kAfter},
      {{"could", "cause"}, R::kConsequence, kAfter},
      {{"as", "a", "result"}, R::kCauseResult, kAfter},
      {{"for", "example"}, R::kElaboration, kAfter},
      {{"such", "as"}, R::kElaboration, kAfter},
      {{"by", "using"}, R::kMannerMeans, kAfter},
      {{"in", "summary"}, R::kSummary, kAfter},
      {{"overall"}, R::kEvaluation, kAfter},
      {{"originally"}, R::kBackground, kAfter},
      {{"regarding"}, R::kTopicComment, kAfter},
  };
  return rules;
}

std::vector<CueRule> parse_cue_rules(std::string_view text) {
  std::vector<CueRule> rules;
  detail::for_each_line(text, [&](std::size_t line_no, std::string_view line) {
    if (detail::is_blank(line) || line.front() == '#') return;
    auto fields = detail::split_tabs(line);
    if (fields.size() != 3) {
      throw FormatError(line_no, "cue rule needs 3 tab-separated fields");
    }
    CueRule rule;
    rule.cue = tokenize(fields[0]);
    if (rule.cue.empty()) throw FormatError(line_no, "empty cue");
    auto label = parse_relation(fields[1]);
    if (!label) {
      throw FormatError(line_no, "unknown relation label '" +
                                     std::string(fields[1]) + "'");
    }
    rule.relation = *label;
    if (fields[2] == "clause-after-cue") {
      rule.scope = CueScope::kClauseAfterCue;
    } else if (fields[2] == "clause-before-cue") {
      rule.scope = CueScope::kClauseBeforeCue;
    } else {
      throw FormatError(line_no, "unknown scope '" + std::string(fields[2]) + "'");
    }
    rules.push_back(std::move(rule));
  });
  return rules;
}

std::string write_cue_rules(std::span<const CueRule> rules) {
  std::string out;
  for (const CueRule& rule : rules) {
    for (std::size_t i = 0; i < rule.cue.size(); ++i) {
      if (i) out += ' ';
      out += rule.cue[i];
    }
    out += '\t';
    out += to_string(rule.relation);
    out += '\t';
    out += to_string(rule.scope);
    out += '\n';
  }
  return out;
}

std::vector<DiscourseSpan> heuristic_tag(const Document& doc,
                                         std::span<const CueRule> rules) {
  const std::vector<CueMatch> matches = find_cues(doc, rules);
  const std::size_t n = doc.tokens.size();

  std::vector<DiscourseSpan> candidates;
  candidates.reserve(matches.size());
  for (std::size_t m = 0; m < matches.size(); ++m) {
    const CueMatch& match = matches[m];
    DiscourseSpan span{match.rule->relation, match.start, match.end};
    if (match.rule->scope == CueScope::kClauseAfterCue) {
      const std::size_t next_cue = m + 1 < matches.size() ? matches[m + 1].start : n;
      span.end = next_cue;
      for (std::size_t i = match.end; i < next_cue; ++i) {
        if (ends_clause(doc, i)) {
          span.end = i + 1;
          break;
        }
      }
    } else {
      const std::size_t prev_cue = m > 0 ? matches[m - 1].end : 0;
      span.start = prev_cue;
      for (std::size_t i = match.start; i > prev_cue; --i) {
        if (ends_clause(doc, i - 1)) {
          span.start = i;
          break;
        }
      }
    }
    candidates.push_back(span);
  }

  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const DiscourseSpan& a, const DiscourseSpan& b) {
                     return a.start < b.start;
                   });
  std::array<std::size_t, kNumRelations> covered_until{};
  std::vector<DiscourseSpan> spans;
  for (const DiscourseSpan& span : candidates) {
    std::size_t& until = covered_until[index_of(span.relation)];
    if (span.start < until) continue;
    until = span.end;
    spans.push_back(span);
  }
  std::sort(spans.begin(), spans.end());
  return spans;
}

std::map<RelationLabel, double> relation_distribution(
    std::span<const Document> documents) {
  std::array<std::size_t, kNumRelations> counts{};
  std::size_t total = 0;
  for (const Document& doc : documents) {
    for (const DiscourseSpan& span : doc.spans) {
      ++counts[index_of(span.relation)];
      ++total;
    }
  }
  if (total == 0) throw Error("no annotations: corpus has no discourse spans");
  std::map<RelationLabel, double> distribution;
  for (RelationLabel label : kAllRelations) {
    if (counts[index_of(label)] == 0) continue;
    distribution[label] =
        100.0 * static_cast<double>(counts[index_of(label)]) / static_cast<double>(total);
  }
  return distribution;
}

}  // namespace rhetrank
