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

#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rhetrank/corpus.hpp"
#include "rhetrank/relation.hpp"

namespace rhetrank {

enum class CueScope : unsigned char {
  kClauseAfterCue,
  kClauseBeforeCue,
};

std::string_view to_string(CueScope scope) noexcept;

/// A cue phrase that signals a relation on one side of itself.
struct CueRule {
  std::vector<std::string> cue;  // canonical tokens, non-empty
  RelationLabel relation;
  CueScope scope = CueScope::kClauseAfterCue;
};

/// The built-in cue list (two dozen common English discourse markers).
const std::vector<CueRule>& default_cue_rules();

/// `<cue words><TAB><relation><TAB><scope>` lines, scope being
/// `clause-after-cue` or `clause-before-cue`.
std::vector<CueRule> parse_cue_rules(std::string_view text);
std::string write_cue_rules(std::span<const CueRule> rules);

/// Cue-word discourse tagger.
///
/// Cue matches are found left to right, longest cue first at each position;
/// tokens inside a match are not matched again. Each match yields a span that
/// includes the cue and extends over the clause on the rule's side. A clause
/// ends at a token followed by clause or sentence punctuation, or where
/// another cue match begins (after-cue) or ends (before-cue). When two spans
/// with the same label overlap the one starting earlier is kept.
std::vector<DiscourseSpan> heuristic_tag(const Document& doc,
                                         std::span<const CueRule> rules);

/// Percentage of spans carrying each label over the whole document set.
/// Only labels that occur are present. Throws Error when there are no spans.
std::map<RelationLabel, double> relation_distribution(
    std::span<const Document> documents);

}  // namespace rhetrank
