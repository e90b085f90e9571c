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

#include <string>
#include <string_view>
#include <vector>

namespace rhetrank {

/// Punctuation seen immediately after a token in the raw text.
enum class Boundary : unsigned char {
  kNone,
  kClause,    // , ; :
  kSentence,  // . ! ?
};

/// Token stream plus the boundary side channel, index-aligned.
struct TokenizedText {
  std::vector<std::string> tokens;
  std::vector<Boundary> boundaries;
};

/// Lowercased maximal runs of letters and digits. Bytes >= 0x80 are treated
/// as letters so UTF-8 words stay whole; only ASCII is case-folded.
std::vector<std::string> tokenize(std::string_view raw_text);

/// Tokenizes and records, for every token, the strongest punctuation found in
/// the separator run that follows it.
TokenizedText tokenize_with_boundaries(std::string_view raw_text);

}  // namespace rhetrank
