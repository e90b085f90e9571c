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
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "rhetrank/corpus.hpp"

namespace rhetrank {

/// Collection frequencies for every term in a document set.
class CollectionStats {
 public:
  CollectionStats() = default;
  /// Throws Error unless the counts are positive and sum to total_tokens.
  CollectionStats(std::unordered_map<std::string, std::uint64_t> frequencies,
                  std::uint64_t total_tokens);

  std::uint64_t collection_frequency(std::string_view term) const;
  std::uint64_t total_tokens() const noexcept { return total_tokens_; }
  std::size_t vocabulary_size() const noexcept { return frequencies_.size(); }

  /// cf(w) / total_tokens, or 1 / (total_tokens + vocabulary_size) for terms
  /// the collection has never seen.
  double collection_probability(std::string_view term) const;

  /// Terms in ascending byte order.
  std::vector<std::pair<std::string, std::uint64_t>> sorted_terms() const;

  friend bool operator==(const CollectionStats&, const CollectionStats&) = default;

 private:
  struct Hash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const noexcept {
      return std::hash<std::string_view>{}(s);
    }
  };
  std::unordered_map<std::string, std::uint64_t, Hash, std::equal_to<>> frequencies_;
  std::uint64_t total_tokens_ = 0;
};

/// Throws Error when the documents hold no tokens at all.
CollectionStats build_stats(std::span<const Document> documents);

/// Occurrences of `term` in the document.
std::size_t term_freq(const Document& doc, std::string_view term);

/// Tokens covered by `span`. The span must lie within the document.
std::vector<std::string> span_text(const Document& doc, const DiscourseSpan& span);

/// Tokens of every span labeled `relation`, concatenated in document order.
std::vector<std::string> relation_text(const Document& doc, RelationLabel relation);

/// Text snapshot:
///   #rhetrank-stats<TAB>1
///   total_tokens<TAB><n>
///   vocabulary_size<TAB><n>
///   <term><TAB><count>      (ascending term order)
std::string write_stats(const CollectionStats& stats);
CollectionStats read_stats(std::string_view text);

}  // namespace rhetrank
