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

#include "rhetrank/index.hpp"

#include <algorithm>

#include "detail/text.hpp"
#include "rhetrank/error.hpp"

namespace rhetrank {
namespace {

constexpr std::string_view kSnapshotMagic = "#rhetrank-stats";
constexpr std::string_view kSnapshotVersion = "1";

}  // namespace

CollectionStats::CollectionStats(
    std::unordered_map<std::string, std::uint64_t> frequencies,
    std::uint64_t total_tokens)
    : total_tokens_(total_tokens) {
  std::uint64_t sum = 0;
  frequencies_.reserve(frequencies.size());
  for (auto& [term, count] : frequencies) {
    if (count == 0) throw Error("collection frequency of '" + term + "' is zero");
    sum += count;
    frequencies_.emplace(term, count);
  }
  if (sum != total_tokens_) {
    throw Error("collection frequencies sum to " + std::to_string(sum) +
                ", expected " + std::to_string(total_tokens_));
  }
}

std::uint64_t CollectionStats::collection_frequency(std::string_view term) const {
  auto it = frequencies_.find(term);
  return it == frequencies_.end() ? 0 : it->second;
}

double CollectionStats::collection_probability(std::string_view term) const {
  const std::uint64_t cf = collection_frequency(term);
  if (cf == 0) {
    return 1.0 / static_cast<double>(total_tokens_ + frequencies_.size());
  }
  return static_cast<double>(cf) / static_cast<double>(total_tokens_);
}

std::vector<std::pair<std::string, std::uint64_t>> CollectionStats::sorted_terms() const {
  std::vector<std::pair<std::string, std::uint64_t>> terms(frequencies_.begin(),
                                                           frequencies_.end());
  std::sort(terms.begin(), terms.end());
  return terms;
}

CollectionStats build_stats(std::span<const Document> documents) {
  std::unordered_map<std::string, std::uint64_t> frequencies;
  std::uint64_t total = 0;
  for (const Document& doc : documents) {
    for (const std::string& token : doc.tokens) ++frequencies[token];
    total += doc.tokens.size();
  }
  if (total == 0) throw Error("cannot build statistics over an empty corpus");
  return CollectionStats(std::move(frequencies), total);
}

std::size_t term_freq(const Document& doc, std::string_view term) {
  return static_cast<std::size_t>(
      std::count(doc.tokens.begin(), doc.tokens.end(), term));
}

std::vector<std::string> span_text(const Document& doc, const DiscourseSpan& span) {
  return {doc.tokens.begin() + static_cast<std::ptrdiff_t>(span.start),
          doc.tokens.begin() + static_cast<std::ptrdiff_t>(span.end)};
}

std::vector<std::string> relation_text(const Document& doc, RelationLabel relation) {
  std::vector<std::string> text;
  for (const DiscourseSpan& span : doc.spans) {
    if (span.relation != relation) continue;
    text.insert(text.end(), doc.tokens.begin() + static_cast<std::ptrdiff_t>(span.start),
                doc.tokens.begin() + static_cast<std::ptrdiff_t>(span.end));
  }
  return text;
}

std::string write_stats(const CollectionStats& stats) {
  std::string out;
  out += kSnapshotMagic;
  out += '\t';
  out += kSnapshotVersion;
  out += "\ntotal_tokens\t" + std::to_string(stats.total_tokens());
  out += "\nvocabulary_size\t" + std::to_string(stats.vocabulary_size()) + '\n';
  for (const auto& [term, count] : stats.sorted_terms()) {
    out += term;
    out += '\t';
    out += std::to_string(count);
    out += '\n';
  }
  return out;
}

CollectionStats read_stats(std::string_view text) {
  std::unordered_map<std::string, std::uint64_t> frequencies;
  std::uint64_t total = 0;
  std::uint64_t vocabulary = 0;
  std::string previous;
  detail::for_each_line(text, [&](std::size_t line_no, std::string_view line) {
    auto fields = detail::split_tabs(line);
    if (line_no == 1) {
      if (fields.size() != 2 || fields[0] != kSnapshotMagic) {
        throw FormatError(line_no, "not a statistics snapshot");
      }
      if (fields[1] != kSnapshotVersion) {
        throw FormatError(line_no, "unsupported snapshot version '" +
                                       std::string(fields[1]) + "'");
      }
      return;
    }
    if (fields.size() != 2) throw FormatError(line_no, "expected '<key><TAB><count>'");
    auto count = detail::parse_number<std::uint64_t>(fields[1]);
    if (!count) throw FormatError(line_no, "invalid count");
    if (line_no == 2) {
      if (fields[0] != "total_tokens") throw FormatError(line_no, "expected total_tokens");
      total = *count;
      return;
    }
    if (line_no == 3) {
      if (fields[0] != "vocabulary_size") {
        throw FormatError(line_no, "expected vocabulary_size");
      }
      vocabulary = *count;
      return;
    }
    std::string term(fields[0]);
    if (term.empty() || (line_no > 4 && term <= previous)) {
      throw FormatError(line_no, "terms must be non-empty and strictly ascending");
    }
    if (*count == 0) throw FormatError(line_no, "zero count");
    previous = term;
    frequencies.emplace(std::move(term), *count);
  });
  if (frequencies.size() != vocabulary) {
    throw FormatError(0, "snapshot lists " + std::to_string(frequencies.size()) +
                             " terms but declares vocabulary_size " +
                             std::to_string(vocabulary));
  }
  try {
    return CollectionStats(std::move(frequencies), total);
  } catch (const Error& e) {
    throw FormatError(0, e.what());
  }
}

}  // namespace rhetrank
