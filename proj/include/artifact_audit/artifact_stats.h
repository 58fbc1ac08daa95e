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

// Token/label co-occurrence counting and the bias statistics built on it.
//
// For a token seen in n records with empirical label distribution p_hat over
// C labels:
//
//   p_star = max_l p_hat[l]
//   z_star = max_l (p_hat[l] - 1/C) / sqrt((1/C) (1 - 1/C) / n)
//
// Under no token/label correlation p_star sits near 1/C and z_star near 0.

#ifndef ARTIFACT_AUDIT_ARTIFACT_STATS_H_
#define ARTIFACT_AUDIT_ARTIFACT_STATS_H_

#include <cstdint>
#include <filesystem>
#include <limits>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "artifact_audit/corpus.h"
#include "artifact_audit/tokenizer.h"

namespace artifact_audit {

using CountVector = std::vector<std::uint64_t>;

struct TokenLabelCounts {
  std::size_t num_labels = 0;
  std::uint64_t total_records = 0;
  std::unordered_map<std::string, CountVector> counts;

  // Adds another shard's counts. Associative and commutative.
  void Merge(const TokenLabelCounts& other);

  friend bool operator==(const TokenLabelCounts&, const TokenLabelCounts&) = default;
};

// Per-record token sets, computed once and shared by counting, indexing and
// correction.
std::vector<TokenSet> TokenizeDataset(const Dataset& dataset,
                                      const TokenizerConfig& config,
                                      unsigned threads = 1);

// Throws CorpusError on an empty dataset.
TokenLabelCounts CountTokenLabels(const Dataset& dataset,
                                  const TokenizerConfig& config,
                                  unsigned threads = 1);
TokenLabelCounts CountTokenLabels(const Dataset& dataset,
                                  std::span<const TokenSet> token_sets);

struct TokenStats {
  std::string token;
  std::uint64_t n = 0;
  CountVector counts;
  std::vector<double> p_hat;
  double p_star = 0.0;
  double z_star = 0.0;
  Label majority_label;
};

// Statistics for a single count vector; ties in the argmax go to the
// smallest label code. Throws std::invalid_argument if the counts sum to 0
// or there are fewer than two labels.
TokenStats ComputeTokenStats(std::string token, const CountVector& counts);

// One entry per token, sorted by token.
std::vector<TokenStats> ComputeStats(const TokenLabelCounts& counts);

struct CountBounds {
  std::uint64_t min_count = 1000;
  std::uint64_t max_count = std::numeric_limits<std::uint64_t>::max();
};

struct TopTokens {
  std::vector<std::string> tokens;
  // Set when fewer than k tokens fell inside the count bounds.
  bool insufficient = false;
};

// The k highest-z_star tokens with min_count <= n <= max_count, ordered by
// z_star descending, then n descending, then token ascending.
TopTokens TopBiasedTokens(std::span<const TokenStats> stats, std::size_t k,
                          const CountBounds& bounds);

// CSV with columns token,n,count_0..count_{C-1},p_star,z_star,majority_label.
void WriteStatsCsv(std::span<const TokenStats> stats, const LabelSet& labels,
                   const std::filesystem::path& path);
std::vector<TokenStats> ReadStatsCsv(const std::filesystem::path& path,
                                     const LabelSet& labels);

}  // namespace artifact_audit

#endif  // ARTIFACT_AUDIT_ARTIFACT_STATS_H_
