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

#include "rhetrank/tokenizer.hpp"

namespace rhetrank {
namespace {

bool is_token_byte(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
         (c >= '0' && c <= '9') || c >= 0x80;
}

char fold(unsigned char c) {
  return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a')
                                : static_cast<char>(c);
}

Boundary boundary_of(unsigned char c) {
  switch (c) {
    case '.':
    case '!':
    case '?':
      return Boundary::kSentence;
    case ',':
    case ';':
    case ':':
      return Boundary::kClause;
    default:
      return Boundary::kNone;
  }
}

}  // namespace

TokenizedText tokenize_with_boundaries(std::string_view raw_text) {
  TokenizedText out;
  std::size_t i = 0;
  const std::size_t n = raw_text.size();
  while (i < n) {
    auto c = static_cast<unsigned char>(raw_text[i]);
    if (!is_token_byte(c)) {
      if (!out.tokens.empty()) {
        Boundary b = boundary_of(c);
        if (b > out.boundaries.back()) out.boundaries.back() = b;
      }
      ++i;
      continue;
    }
    std::string token;
    while (i < n && is_token_byte(static_cast<unsigned char>(raw_text[i]))) {
      token.push_back(fold(static_cast<unsigned char>(raw_text[i])));
      ++i;
    }
    out.tokens.push_back(std::move(token));
    out.boundaries.push_back(Boundary::kNone);
  }
  return out;
}

std::vector<std::string> tokenize(std::string_view raw_text) {
  return tokenize_with_boundaries(raw_text).tokens;
}

}  // namespace rhetrank
