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

#include "rhetrank/relation.hpp"

#include <string>

#include "rhetrank/error.hpp"

namespace rhetrank {
namespace {

constexpr std::array<std::string_view, kNumRelations> kNames = {
    "attribution", "background",  "cause-result", "comparison",
    "condition",   "consequence", "contrast",     "elaboration",
    "enablement",  "evaluation",  "explanation",  "manner-means",
    "summary",     "temporal",    "topic-comment",
};

}  // namespace

std::string_view to_string(RelationLabel label) noexcept {
  return kNames[index_of(label)];
}

std::optional<RelationLabel> parse_relation(std::string_view name) noexcept {
  for (std::size_t i = 0; i < kNumRelations; ++i) {
    if (kNames[i] == name) return kAllRelations[i];
  }
  return std::nullopt;
}

RelationLabel relation_from_string(std::string_view name) {
  if (auto label = parse_relation(name)) return *label;
  throw Error("unknown rhetorical relation '" + std::string(name) + "'");
}

}  // namespace rhetrank
