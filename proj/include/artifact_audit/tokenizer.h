// Copyright 2026 The artifact-audit Authors.
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

#ifndef ARTIFACT_AUDIT_TOKENIZER_H_
#define ARTIFACT_AUDIT_TOKENIZER_H_

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "artifact_audit/corpus.h"

namespace artifact_audit {

enum class TokenizerMode {
  // Split on whitespace and punctuation, keep whole words.
  kWhitespace,
  // As kWhitespace, then reduce words missing from a stem vocabulary to
  // their longest in-vocabulary prefix, the way a greedy subword tokenizer
  // keeps only its head piece ("catch" -> "cat" when "catch" is unknown).
  kPrefixStem,
};

std::optional<TokenizerMode> ParseTokenizerMode(std::string_view text);
std::string_view TokenizerModeName(TokenizerMode mode);

using WordSet = std::unordered_set<std::string>;

// The classic 127-word English stopword list.
const WordSet& DefaultStopwords();

// One word per line; '#' starts a comment; blank lines ignored. Words are
// lowercased and stripped of punctuation on load.
WordSet LoadWordList(const std::filesystem::path& path);

struct TokenizerConfig {
  TokenizerMode mode = TokenizerMode::kWhitespace;
  WordSet stopwords = DefaultStopwords();
  // Only consulted in kPrefixStem mode. Must be non-empty there.
  WordSet stem_vocabulary;
  std::size_t min_stem_length = 3;
};

// Distinct tokens of one record, sorted.
struct TokenSet {
  std::vector<std::string> tokens;

  bool contains(std::string_view token) const;
  std::size_t size() const { return tokens.size(); }
  bool empty() const { return tokens.empty(); }
};

// Lowercases ASCII letters and deletes punctuation. Returns nothing when the
// result is empty or a stopword. Bytes >= 0x80 are kept as word characters.
std::optional<std::string> NormalizeToken(std::string_view raw,
                                          const TokenizerConfig& config);

// Union of the premise and hypothesis tokens, each counted once.
TokenSet TokenizeRecord(const Record& record, const TokenizerConfig& config);

}  // namespace artifact_audit

#endif  // ARTIFACT_AUDIT_TOKENIZER_H_
