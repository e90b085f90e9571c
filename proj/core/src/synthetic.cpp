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

#include "rhetrank/synthetic.hpp"

#include <algorithm>
#include <stdexcept>

#include "rhetrank/random.hpp"

namespace rhetrank {
namespace {

class Builder {
 public:
  Builder(const SyntheticSpec& spec, SeededRng& rng) : spec_(spec), rng_(rng) {}

  std::string filler() {
    return "w" + std::to_string(rng_.below(spec_.background_vocabulary));
  }

  RelationLabel other_relation() {
    auto label = kAllRelations[rng_.below(kNumRelations - 1)];
    if (label >= spec_.seeded_relation) {
      label = kAllRelations[index_of(label) + 1];
    }
    return label;
  }

  void append_filler(Document& doc, std::size_t count) {
    for (std::size_t i = 0; i < count; ++i) doc.tokens.push_back(filler());
  }

  // Appends a span of `length` filler tokens with `terms` overwritten at
  // distinct random positions.
  void append_span(Document& doc, RelationLabel label, std::size_t length,
                   const std::vector<std::string>& terms) {
    if (terms.size() > length) throw std::invalid_argument("span too short for its terms");
    const std::size_t start = doc.tokens.size();
    append_filler(doc, length);
    std::vector<std::size_t> slots(length);
    for (std::size_t i = 0; i < length; ++i) slots[i] = start + i;
    rng_.shuffle(slots);
    for (std::size_t i = 0; i < terms.size(); ++i) doc.tokens[slots[i]] = terms[i];
    doc.spans.push_back({label, start, start + length});
  }

 private:
  const SyntheticSpec& spec_;
  SeededRng& rng_;
};

std::vector<std::string> repeat_terms(const Query& q, std::size_t times) {
  std::vector<std::string> out;
  for (std::size_t t = 0; t < times; ++t) {
    out.insert(out.end(), q.terms.begin(), q.terms.end());
  }
  return out;
}

std::size_t require_split(std::size_t total, std::size_t used) {
  if (used > total) throw std::invalid_argument("synthetic document too short for its layout");
  return total - used;
}

}  // namespace

SyntheticCollection generate_synthetic(const SyntheticSpec& spec) {
  if (spec.num_queries == 0 || spec.background_vocabulary == 0) {
    throw std::invalid_argument("synthetic collection needs queries and vocabulary");
  }
  SeededRng rng(spec.seed);
  Builder build(spec, rng);
  const RelationLabel seeded = spec.seeded_relation;

  struct Pending {
    Document doc;
    std::string query_id;
    int grade = -1;  // -1: unjudged
  };
  std::vector<Pending> pending;
  SyntheticCollection out;

  for (std::size_t q = 0; q < spec.num_queries; ++q) {
    Query query;
    query.id = spec.query_prefix + std::to_string(q + 1);
    query.terms = {query.id + "x", query.id + "y"};
    out.queries.push_back(query);

    for (std::size_t i = 0; i < spec.relevant_per_query; ++i) {
      Document doc;
      const std::size_t rest = require_split(spec.relevant_length, spec.relevant_span);
      const std::size_t head = rest / 2;
      build.append_span(doc, build.other_relation(), head, {});
      build.append_span(doc, seeded, spec.relevant_span,
                        repeat_terms(query, spec.relevant_term_count));
      build.append_filler(doc, rest - head);
      pending.push_back({std::move(doc), query.id, 1});
    }
    for (std::size_t i = 0; i < spec.distractors_per_query; ++i) {
      Document doc;
      const std::size_t other = 10;
      const std::size_t seeded_span = 10;
      const std::size_t rest =
          require_split(spec.distractor_length, other + seeded_span);
      build.append_span(doc, build.other_relation(), other,
                        repeat_terms(query, spec.distractor_term_count));
      build.append_filler(doc, rest / 2);
      build.append_span(doc, seeded, seeded_span, {});
      build.append_filler(doc, rest - rest / 2);
      pending.push_back({std::move(doc), query.id, 0});
    }
    for (std::size_t i = 0; i < spec.decoys_per_query; ++i) {
      Document doc;
      const std::size_t rest = require_split(spec.decoy_length, query.terms.size());
      build.append_span(doc, build.other_relation(), rest / 2, {});
      build.append_span(doc, seeded, query.terms.size(), query.terms);
      build.append_filler(doc, rest - rest / 2);
      pending.push_back({std::move(doc), query.id, 0});
    }
  }
  for (std::size_t i = 0; i < spec.background_documents; ++i) {
    Document doc;
    const std::size_t rest = require_split(spec.background_length, 30);
    build.append_span(doc, build.other_relation(), 20, {});
    build.append_span(doc, seeded, 10, {});
    build.append_filler(doc, rest);
    pending.push_back({std::move(doc), "", -1});
  }

  rng.shuffle(pending);
  const std::size_t width = std::to_string(pending.size()).size();
  for (std::size_t i = 0; i < pending.size(); ++i) {
    std::string number = std::to_string(i + 1);
    Pending& p = pending[i];
    p.doc.id = "d" + std::string(width - number.size(), '0') + number;
    p.doc.boundaries.assign(p.doc.tokens.size(), Boundary::kNone);
    std::sort(p.doc.spans.begin(), p.doc.spans.end());
    p.doc.spans.erase(std::remove_if(p.doc.spans.begin(), p.doc.spans.end(),
                                     [](const DiscourseSpan& s) { return s.start == s.end; }),
                      p.doc.spans.end());
    if (p.grade >= 0) out.judgments[p.query_id][p.doc.id] = p.grade;
    out.documents.push_back(std::move(p.doc));
  }
  return out;
}

std::string write_documents(const std::vector<Document>& documents) {
  std::string out;
  for (const Document& doc : documents) {
    out += doc.id;
    out += '\t';
    for (std::size_t i = 0; i < doc.tokens.size(); ++i) {
      if (i) out += ' ';
      out += doc.tokens[i];
    }
    out += '\n';
  }
  return out;
}

}  // namespace rhetrank
