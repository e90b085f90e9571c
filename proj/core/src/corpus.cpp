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

#include "rhetrank/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_set>

#include "detail/text.hpp"
#include "rhetrank/error.hpp"

namespace rhetrank {

using detail::for_each_line;
using detail::is_blank;
using detail::parse_number;

bool Document::has_relation(RelationLabel label) const noexcept {
  return std::any_of(spans.begin(), spans.end(),
                     [label](const DiscourseSpan& s) { return s.relation == label; });
}

Document make_document(std::string id, std::string_view raw_text) {
  TokenizedText text = tokenize_with_boundaries(raw_text);
  Document doc;
  doc.id = std::move(id);
  doc.tokens = std::move(text.tokens);
  doc.boundaries = std::move(text.boundaries);
  return doc;
}

void validate_spans(const Document& doc) {
  std::vector<DiscourseSpan> sorted = doc.spans;
  std::sort(sorted.begin(), sorted.end(),
            [](const DiscourseSpan& a, const DiscourseSpan& b) {
              return std::tie(a.relation, a.start, a.end) <
                     std::tie(b.relation, b.start, b.end);
            });
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const DiscourseSpan& s = sorted[i];
    if (s.start >= s.end) {
      throw FormatError(0, "document '" + doc.id + "': empty span");
    }
    if (s.end > doc.length()) {
      throw FormatError(0, "document '" + doc.id + "': span end " +
                               std::to_string(s.end) + " exceeds length " +
                               std::to_string(doc.length()));
    }
    if (i > 0 && sorted[i - 1].relation == s.relation &&
        sorted[i - 1].end > s.start) {
      throw FormatError(0, "document '" + doc.id + "': overlapping " +
                               std::string(to_string(s.relation)) + " spans");
    }
  }
}

Collection::Collection(std::vector<Document> documents)
    : documents_(std::move(documents)) {
  by_id_.reserve(documents_.size());
  for (std::size_t i = 0; i < documents_.size(); ++i) {
    const std::string& id = documents_[i].id;
    if (id.empty()) throw FormatError(0, "document with empty id");
    if (!by_id_.emplace(id, i).second) {
      throw FormatError(0, "duplicate document id '" + id + "'");
    }
  }
}

const Document* Collection::find(std::string_view id) const {
  auto it = by_id_.find(std::string(id));
  return it == by_id_.end() ? nullptr : &documents_[it->second];
}

std::vector<Query> parse_topics(std::string_view text) {
  std::vector<Query> queries;
  std::unordered_set<std::string> seen;
  for_each_line(text, [&](std::size_t line_no, std::string_view line) {
    if (is_blank(line)) return;
    std::size_t tab = line.find('\t');
    if (tab == std::string_view::npos) {
      throw FormatError(line_no, "topic line has no tab separator");
    }
    Query q;
    q.id = std::string(line.substr(0, tab));
    if (q.id.empty()) throw FormatError(line_no, "empty query id");
    if (!seen.insert(q.id).second) {
      throw FormatError(line_no, "duplicate query id '" + q.id + "'");
    }
    q.terms = tokenize(line.substr(tab + 1));
    if (q.terms.empty()) {
      throw FormatError(line_no, "query '" + q.id + "' has no terms");
    }
    queries.push_back(std::move(q));
  });
  return queries;
}

std::string write_topics(std::span<const Query> queries) {
  std::string out;
  for (const Query& q : queries) {
    out += q.id;
    out += '\t';
    for (std::size_t i = 0; i < q.terms.size(); ++i) {
      if (i) out += ' ';
      out += q.terms[i];
    }
    out += '\n';
  }
  return out;
}

Judgments parse_qrels(std::string_view text) {
  Judgments judgments;
  for_each_line(text, [&](std::size_t line_no, std::string_view line) {
    if (is_blank(line)) return;
    auto fields = detail::split_whitespace(line);
    if (fields.size() != 4) {
      throw FormatError(line_no, "qrels line needs 4 fields, found " +
                                     std::to_string(fields.size()));
    }
    auto grade = parse_number<int>(fields[3]);
    if (!grade) {
      throw FormatError(line_no, "non-integer grade '" +
                                     std::string(fields[3]) + "'");
    }
    judgments[std::string(fields[0])][std::string(fields[2])] =
        std::max(*grade, 0);
  });
  return judgments;
}

std::string write_qrels(const Judgments& judgments) {
  std::string out;
  for (const auto& [qid, docs] : judgments) {
    for (const auto& [docid, grade] : docs) {
      out += qid + " 0 " + docid + ' ' + std::to_string(grade) + '\n';
    }
  }
  return out;
}

Run read_run(std::string_view text) {
  Run run;
  struct QueryState {
    std::size_t last_rank = 0;
    double last_score = 0.0;
  };
  std::unordered_map<std::string, QueryState> state;
  for_each_line(text, [&](std::size_t line_no, std::string_view line) {
    if (is_blank(line)) return;
    auto fields = detail::split_whitespace(line);
    if (fields.size() != 6) {
      throw FormatError(line_no, "run line needs 6 fields, found " +
                                     std::to_string(fields.size()));
    }
    RunEntry e;
    e.query_id = std::string(fields[0]);
    e.doc_id = std::string(fields[2]);
    auto rank = parse_number<std::size_t>(fields[3]);
    auto score = parse_number<double>(fields[4]);
    if (!rank || *rank == 0) throw FormatError(line_no, "invalid rank");
    if (!score) throw FormatError(line_no, "invalid score");
    e.rank = *rank;
    e.score = *score;
    e.tag = std::string(fields[5]);

    QueryState& qs = state[e.query_id];
    if (e.rank != qs.last_rank + 1) {
      throw FormatError(line_no, "query '" + e.query_id + "': expected rank " +
                                     std::to_string(qs.last_rank + 1) +
                                     ", found " + std::to_string(e.rank));
    }
    if (qs.last_rank > 0 && e.score > qs.last_score) {
      throw FormatError(line_no, "query '" + e.query_id +
                                     "': score increases with rank");
    }
    qs.last_rank = e.rank;
    qs.last_score = e.score;
    run.push_back(std::move(e));
  });
  return run;
}

std::string write_run(const Run& run) {
  std::string out;
  for (const RunEntry& e : run) {
    out += e.query_id;
    out += " Q0 ";
    out += e.doc_id;
    out += ' ';
    out += std::to_string(e.rank);
    out += ' ';
    out += detail::format_fixed(e.score, 6);
    out += ' ';
    out += e.tag;
    out += '\n';
  }
  return out;
}

std::map<std::string, std::vector<RunEntry>> group_by_query(const Run& run) {
  std::map<std::string, std::vector<RunEntry>> grouped;
  for (const RunEntry& e : run) grouped[e.query_id].push_back(e);
  for (auto& [qid, entries] : grouped) {
    std::stable_sort(entries.begin(), entries.end(),
                     [](const RunEntry& a, const RunEntry& b) {
                       return a.rank < b.rank;
                     });
  }
  return grouped;
}

std::vector<Document> parse_documents(std::string_view text) {
  std::vector<Document> docs;
  std::unordered_set<std::string> seen;
  for_each_line(text, [&](std::size_t line_no, std::string_view line) {
    if (is_blank(line)) return;
    std::size_t tab = line.find('\t');
    if (tab == std::string_view::npos || tab == 0) {
      throw FormatError(line_no, "document line needs '<docid><TAB><text>'");
    }
    std::string id(line.substr(0, tab));
    if (!seen.insert(id).second) {
      throw FormatError(line_no, "duplicate document id '" + id + "'");
    }
    docs.push_back(make_document(std::move(id), line.substr(tab + 1)));
  });
  return docs;
}

std::vector<Document> load_documents(const std::filesystem::path& path) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(path)) return parse_documents(read_text_file(path));
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(path)) {
    if (entry.is_regular_file()) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<Document> docs;
  docs.reserve(files.size());
  for (const auto& file : files) {
    docs.push_back(make_document(file.filename().string(), read_text_file(file)));
  }
  return docs;
}

AnnotatedDocuments parse_annotations(std::string_view text,
                                     std::vector<Document> documents) {
  std::unordered_map<std::string_view, std::size_t> by_id;
  for (std::size_t i = 0; i < documents.size(); ++i) by_id[documents[i].id] = i;

  AnnotatedDocuments result;
  for_each_line(text, [&](std::size_t line_no, std::string_view line) {
    if (is_blank(line)) return;
    auto fields = detail::split_tabs(line);
    if (fields.size() != 4) {
      throw FormatError(line_no, "annotation line needs 4 tab-separated fields");
    }
    auto label = parse_relation(fields[1]);
    if (!label) {
      throw FormatError(line_no, "unknown relation label '" +
                                     std::string(fields[1]) + "'");
    }
    auto start = parse_number<std::size_t>(fields[2]);
    auto end = parse_number<std::size_t>(fields[3]);
    if (!start || !end) throw FormatError(line_no, "invalid span offsets");
    if (*start >= *end) throw FormatError(line_no, "span start >= end");

    auto it = by_id.find(fields[0]);
    if (it == by_id.end()) {
      ++result.skipped_lines;
      return;
    }
    Document& doc = documents[it->second];
    if (*end > doc.length()) {
      throw FormatError(line_no, "span end " + std::to_string(*end) +
                                     " exceeds document length " +
                                     std::to_string(doc.length()));
    }
    DiscourseSpan span{*label, *start, *end};
    for (const DiscourseSpan& other : doc.spans) {
      if (other.relation == span.relation && other.overlaps(span)) {
        throw FormatError(line_no, "overlapping " +
                                       std::string(to_string(span.relation)) +
                                       " spans in document '" + doc.id + "'");
      }
    }
    doc.spans.push_back(span);
  });
  for (Document& doc : documents) std::sort(doc.spans.begin(), doc.spans.end());
  result.documents = std::move(documents);
  return result;
}

std::string write_annotations(std::span<const Document> documents) {
  std::string out;
  for (const Document& doc : documents) {
    for (const DiscourseSpan& s : doc.spans) {
      out += doc.id;
      out += '\t';
      out += to_string(s.relation);
      out += '\t';
      out += std::to_string(s.start);
      out += '\t';
      out += std::to_string(s.end);
      out += '\n';
    }
  }
  return out;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace rhetrank
