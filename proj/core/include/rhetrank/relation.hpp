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

#include <array>
#include <cstddef>
#include <optional>
#include <string_view>

namespace rhetrank {

/// The closed set of fifteen rhetorical relations. Enumerator order is the
/// lexicographic order of the label strings, which tie-breaking relies on.
enum class RelationLabel : unsigned char {
  kAttribution,
  kBackground,
  kCauseResult,
  kComparison,
  kCondition,
  kConsequence,
  kContrast,
  kElaboration,
  kEnablement,
  kEvaluation,
  kExplanation,
  kMannerMeans,
  kSummary,
  kTemporal,
  kTopicComment,
};

inline constexpr std::size_t kNumRelations = 15;

inline constexpr std::array<RelationLabel, kNumRelations> kAllRelations = {
    RelationLabel::kAttribution, RelationLabel::kBackground,
    RelationLabel::kCauseResult, RelationLabel::kComparison,
    RelationLabel::kCondition,   RelationLabel::kConsequence,
    RelationLabel::kContrast,    RelationLabel::kElaboration,
    RelationLabel::kEnablement,  RelationLabel::kEvaluation,
    RelationLabel::kExplanation, RelationLabel::kMannerMeans,
    RelationLabel::kSummary,     RelationLabel::kTemporal,
    RelationLabel::kTopicComment,
};

constexpr std::size_t index_of(RelationLabel label) noexcept {
  return static_cast<std::size_t>(label);
}

/// Canonical lowercase name, e.g. "cause-result".
std::string_view to_string(RelationLabel label) noexcept;

/// Exact, case-sensitive match against the canonical names.
std::optional<RelationLabel> parse_relation(std::string_view name) noexcept;

/// Like parse_relation but throws rhetrank::Error for unknown names.
RelationLabel relation_from_string(std::string_view name);

}  // namespace rhetrank
