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

#ifndef ARTIFACT_AUDIT_EVALUATION_H_
#define ARTIFACT_AUDIT_EVALUATION_H_

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "artifact_audit/artifact_stats.h"
#include "artifact_audit/corpus.h"
#include "artifact_audit/tokenizer.h"

namespace artifact_audit {

class EvaluationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PredictionSet {
  std::string model_name;
  std::unordered_map<std::string, Label> predicted;
};

// JSONL with keys id, predicted_label, or CSV with header id,predicted_label
// (chosen by a .csv extension). Labels may be names or codes.
PredictionSet LoadPredictions(const std::filesystem::path& path, const LabelSet& labels);

// Training statistics keyed by token; the majority label of each token comes
// from here, never from the test data.
using StatsIndex = std::unordered_map<std::string, TokenStats>;
StatsIndex IndexStats(std::span<const TokenStats> stats);

struct MajorityMinoritySplit {
  std::vector<const Record*> majority;
  std::vector<const Record*> minority;
};

// Throws EvaluationError if `token` has no training statistics.
MajorityMinoritySplit SplitMajorityMinority(const Dataset& test,
                                            const StatsIndex& train_stats,
                                            const std::string& token,
                                            const TokenizerConfig& config);
MajorityMinoritySplit SplitMajorityMinority(const Dataset& test,
                                            std::span<const TokenSet> test_tokens,
                                            const StatsIndex& train_stats,
                                            const std::string& token);

// Fraction of records whose prediction equals the gold label; nothing for an
// empty subset. Throws EvaluationError when a record has no prediction.
std::optional<double> Accuracy(const PredictionSet& predictions,
                               std::span<const Record* const> subset);
std::optional<double> Accuracy(const PredictionSet& predictions,
                               std::span<const Record> subset);

struct TokenAccuracyRow {
  std::string token;
  std::size_t n_majority = 0;
  std::size_t n_minority = 0;
  std::optional<double> acc_majority;
  std::optional<double> acc_minority;
  std::optional<double> acc_overall;
};

std::vector<TokenAccuracyRow> TokenAccuracyTable(const Dataset& test,
                                                 const PredictionSet& predictions,
                                                 const StatsIndex& train_stats,
                                                 std::span<const std::string> tokens,
                                                 const TokenizerConfig& config);

struct AccuracySummary {
  std::size_t n_total = 0;
  std::optional<double> overall;
  // Records containing at least one of the tokens, and the others.
  std::size_t n_with_tokens = 0;
  std::optional<double> with_tokens;
  std::size_t n_without_tokens = 0;
  std::optional<double> without_tokens;
};

AccuracySummary SummarizeAccuracy(const Dataset& test, const PredictionSet& predictions,
                                  std::span<const std::string> tokens,
                                  const TokenizerConfig& config);

// CSV token,n_major,n_minor,acc_major,acc_minor,acc_overall; absent
// accuracies are empty fields.
void WriteAccuracyCsv(std::span<const TokenAccuracyRow> rows,
                      const std::filesystem::path& path);

// Side-by-side table of two runs over the same tokens, one line per token:
//   token & (0.98, 0.97) & (0.85, 0.89) & (0.95, 0.95)
// with each pair being (before, after) for major, minor, overall.
std::string FormatComparisonTable(std::span<const TokenAccuracyRow> before,
                                  std::span<const TokenAccuracyRow> after);

// "overall accuracy: 89.149% -> 89.667%"
std::string FormatOverallComparison(const AccuracySummary& before,
                                    const AccuracySummary& after);

}  // namespace artifact_audit

#endif  // ARTIFACT_AUDIT_EVALUATION_H_
