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

#ifndef ARTIFACT_AUDIT_COMMANDS_H_
#define ARTIFACT_AUDIT_COMMANDS_H_

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "artifact_audit/audac.h"
#include "artifact_audit/tokenizer.h"

namespace artifact_audit {

// Exit codes of the subcommands.
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitNotConverged = 2;

struct RunConfig {
  // analyze / correct
  std::filesystem::path input;
  std::filesystem::path output;
  std::filesystem::path stats_out;
  std::filesystem::path topk_out;
  std::filesystem::path report_out;

  // evaluate
  std::filesystem::path test;
  std::filesystem::path predictions;
  std::filesystem::path baseline_predictions;
  std::filesystem::path train_stats;
  std::filesystem::path out;
  std::filesystem::path summary_out;
  // Tokens to score; empty means the top k of the training statistics.
  std::vector<std::string> tokens;

  std::vector<std::string> labels = {"entailment", "neutral", "contradiction"};
  TokenizerMode tokenizer = TokenizerMode::kWhitespace;
  std::filesystem::path stopwords;
  std::filesystem::path stem_vocab;

  AudacParams audac;
};

LabelSet MakeLabelSet(const RunConfig& config);
TokenizerConfig MakeTokenizerConfig(const RunConfig& config);

// Writes the stats CSV and the top-k JSON, prints the highest-z_star token.
int Analyze(const RunConfig& config, std::ostream& log);

// Writes the corrected dataset and the JSON report. Returns kExitNotConverged
// (after writing everything) when the loop stopped at max_iters.
int Correct(const RunConfig& config, std::ostream& log);

// Writes the per-token accuracy CSV; optionally a JSON summary, and a
// before/after comparison when baseline predictions are given.
int Evaluate(const RunConfig& config, std::ostream& log);

}  // namespace artifact_audit

#endif  // ARTIFACT_AUDIT_COMMANDS_H_
