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

#include "artifact_audit/tokenizer.h"

#include <algorithm>
#include <fstream>
#include <stdexcept>

namespace artifact_audit {
namespace {

bool IsAsciiPunct(unsigned char c) {
  return (c >= 0x21 && c <= 0x2f) || (c >= 0x3a && c <= 0x40) ||
         (c >= 0x5b && c <= 0x60) || (c >= 0x7b && c <= 0x7e);
}

bool IsAsciiSpace(unsigned char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

std::string StripAndLower(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  for (const char ch : raw) {
    const auto c = static_cast<unsigned char>(ch);
    if (IsAsciiPunct(c) || IsAsciiSpace(c)) continue;
    out.push_back((c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : ch);
  }
  return out;
}

std::string Stem(std::string word, const TokenizerConfig& config) {
  if (config.stem_vocabulary.contains(word)) return word;
  for (std::size_t len = word.size() - 1; len >= config.min_stem_length && len > 0; --len) {
    std::string prefix = word.substr(0, len);
    if (config.stem_vocabulary.contains(prefix)) return prefix;
  }
  return word;
}

// Punctuation and whitespace both separate words, so "ice-cream" and
// "man's" split into parts.
void AddTokens(std::string_view text, const TokenizerConfig& config,
               std::vector<std::string>& out) {
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size()) {
      const auto c = static_cast<unsigned char>(text[i]);
      if (!IsAsciiPunct(c) && !IsAsciiSpace(c)) break;
      ++i;
    }
    const std::size_t start = i;
    while (i < text.size()) {
      const auto c = static_cast<unsigned char>(text[i]);
      if (IsAsciiPunct(c) || IsAsciiSpace(c)) break;
      ++i;
    }
    if (i == start) continue;
    std::optional<std::string> token = NormalizeToken(text.substr(start, i - start), config);
    if (!token) continue;
    if (config.mode == TokenizerMode::kPrefixStem) {
      std::string stemmed = Stem(std::move(*token), config);
      if (config.stopwords.contains(stemmed)) continue;
      out.push_back(std::move(stemmed));
    } else {
      out.push_back(std::move(*token));
    }
  }
}

}  // namespace

std::optional<TokenizerMode> ParseTokenizerMode(std::string_view text) {
  if (text == "whitespace") return TokenizerMode::kWhitespace;
  if (text == "prefix_stem") return TokenizerMode::kPrefixStem;
  return std::nullopt;
}

std::string_view TokenizerModeName(TokenizerMode mode) {
  return mode == TokenizerMode::kWhitespace ? "whitespace" : "prefix_stem";
}

const WordSet& DefaultStopwords() {
  static const WordSet* const kWords = new WordSet{
      "i",       "me",         "my",      "myself",  "we",      "our",     "ours",
      "ourselves", "you",      "your",    "yours",   "yourself", "yourselves", "he",
      "him",     "his",        "himself", "she",     "her",     "hers",    "herself",
      "it",      "its",        "itself",  "they",    "them",    "their",   "theirs",
      "themselves", "what",    "which",   "who",     "whom",    "this",    "that",
      "these",   "those",      "am",      "is",      "are",     "was",     "were",
      "be",      "been",       "being",   "have",    "has",     "had",     "having",
      "do",      "does",       "did",     "doing",   "a",       "an",      "the",
      "and",     "but",        "if",      "or",      "because", "as",      "until",
      "while",   "of",         "at",      "by",      "for",     "with",    "about",
      "against", "between",    "into",    "through", "during",  "before",  "after",
      "above",   "below",      "to",      "from",    "up",      "down",    "in",
      "out",     "on",         "off",     "over",    "under",   "again",   "further",
      "then",    "once",       "here",    "there",   "when",    "where",   "why",
      "how",     "all",        "any",     "both",    "each",    "few",     "more",
      "most",    "other",      "some",    "such",    "no",      "nor",     "not",
      "only",    "own",        "same",    "so",      "than",    "too",     "very",
      "s",       "t",          "can",     "will",    "just",    "don",     "should",
      "now"};
  return *kWords;
}

WordSet LoadWordList(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open word list " + path.string());
  WordSet words;
  std::string line;
  while (std::getline(in, line)) {
    if (const std::size_t hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::string word = StripAndLower(line);
    if (!word.empty()) words.insert(std::move(word));
  }
  return words;
}

bool TokenSet::contains(std::string_view token) const {
  return std::binary_search(tokens.begin(), tokens.end(), token,
                            [](std::string_view a, std::string_view b) { return a < b; });
}

std::optional<std::string> NormalizeToken(std::string_view raw,
                                          const TokenizerConfig& config) {
  std::string token = StripAndLower(raw);
  if (token.empty() || config.stopwords.contains(token)) return std::nullopt;
  return token;
}

TokenSet TokenizeRecord(const Record& record, const TokenizerConfig& config) {
  if (config.mode == TokenizerMode::kPrefixStem && config.stem_vocabulary.empty()) {
    throw std::invalid_argument("prefix_stem mode needs a stem vocabulary");
  }
  TokenSet set;
  AddTokens(record.premise, config, set.tokens);
  AddTokens(record.hypothesis, config, set.tokens);
  std::sort(set.tokens.begin(), set.tokens.end());
  set.tokens.erase(std::unique(set.tokens.begin(), set.tokens.end()), set.tokens.end());
  return set;
}

}  // namespace artifact_audit
