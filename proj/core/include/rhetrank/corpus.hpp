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

// Data model and line-oriented readers/writers for topics, qrels, TREC run
// files, raw documents and discourse annotations.

#include <compare>
#include <cstddef>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "rhetrank/relation.hpp"
#include "rhetrank/tokenizer.hpp"

namespace rhetrank {

struct Query {
  std::string id;
  std::vector<std::string> terms;
};

/// Half-open token range [start, end) carrying one relation label.
struct DiscourseSpan {
  RelationLabel relation;
  std::size_t start = 0;
  std::size_t end = 0;

  std::size_t size() const noexcept { return end - start; }
  bool overlaps(const DiscourseSpan& other) const noexcept {
    return start < other.end && other.start < end;
  }
  friend bool operator==(const DiscourseSpan&, const DiscourseSpan&) = default;
  /// Document order: by start, then end, then label.
  friend auto operator<=>(const DiscourseSpan& a, const DiscourseSpan& b) {
    return std::tie(a.start, a.end, a.relation) <=>
           std::tie(b.start, b.end, b.relation);
  }
};

struct Document {
  std::string id;
  std::vector<std::string> tokens;
  /// Index-aligned with tokens; may be empty when the document was built
  /// from tokens rather than raw text.
  std::vector<Boundary> boundaries;
  /// Sorted by (start, end, relation).
  std::vector<DiscourseSpan> spans;

  std::size_t length() const noexcept { return tokens.size(); }
  bool has_relation(RelationLabel label) const noexcept;
};

/// Builds a document by running the tokenizer over `raw_text`.
Document make_document(std::string id, std::string_view raw_text);

/// Throws FormatError when a span is empty, out of range, or overlaps another
/// span with the same label. Spans of different labels may overlap.
void validate_spans(const Document& doc);

/// Immutable document set with id lookup.
class Collection {
 public:
  Collection() = default;
  /// Throws FormatError on empty or duplicate document ids.
  explicit Collection(std::vector<Document> documents);

  std::size_t size() const noexcept { return documents_.size(); }
  bool empty() const noexcept { return documents_.empty(); }
  const Document& operator[](std::size_t i) const { return documents_[i]; }
  const Document* find(std::string_view id) const;
  std::span<const Document> documents() const noexcept { return documents_; }
  auto begin() const noexcept { return documents_.begin(); }
  auto end() const noexcept { return documents_.end(); }

 private:
  std::vector<Document> documents_;
  std::unordered_map<std::string, std::size_t> by_id_;
};

/// query id -> document id -> grade. Absent documents are unjudged.
using Judgments = std::map<std::string, std::map<std::string, int>, std::less<>>;

struct RunEntry {
  std::string query_id;
  std::string doc_id;
  std::size_t rank = 0;
  double score = 0.0;
  std::string tag;

  friend bool operator==(const RunEntry&, const RunEntry&) = default;
};

using Run = std::vector<RunEntry>;

/// `<qid><TAB><free text>` lines; blank lines are skipped.
std::vector<Query> parse_topics(std::string_view text);
std::string write_topics(std::span<const Query> queries);

/// `<qid> <iter> <docid> <grade>` lines. Last duplicate wins, negative grades
/// clamp to zero.
Judgments parse_qrels(std::string_view text);
std::string write_qrels(const Judgments& judgments);

/// `<qid> Q0 <docid> <rank> <score> <tag>` lines. Ranks must run 1..k per
/// query in file order with non-increasing scores.
Run read_run(std::string_view text);
/// Scores are printed with six decimals.
std::string write_run(const Run& run);

/// Entries of each query in rank order, queries keyed by id.
std::map<std::string, std::vector<RunEntry>> group_by_query(const Run& run);

/// `<docid><TAB><text>` lines.
std::vector<Document> parse_documents(std::string_view text);
/// A regular file is parsed with parse_documents; a directory contributes one
/// document per regular file, named by file name, in sorted name order.
std::vector<Document> load_documents(const std::filesystem::path& path);

struct AnnotatedDocuments {
  std::vector<Document> documents;
  std::size_t skipped_lines = 0;  // lines naming unknown document ids
};

/// `<docid><TAB><relation><TAB><start><TAB><end>` lines, token offsets.
/// Spans are merged with any already present on the documents.
AnnotatedDocuments parse_annotations(std::string_view text,
                                     std::vector<Document> documents);
std::string write_annotations(std::span<const Document> documents);

std::string read_text_file(const std::filesystem::path& path);

}  // namespace rhetrank
