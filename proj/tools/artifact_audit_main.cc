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

#include <exception>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "artifact_audit/commands.h"

using artifact_audit::RunConfig;

namespace {

struct SharedFlags {
  std::optional<std::uint64_t> max_count;
  std::string tokenizer = "whitespace";
};

void AddShared(CLI::App* cmd, RunConfig& config, SharedFlags& shared) {
  cmd->add_option("--tokenizer", shared.tokenizer, "Tokenizer mode")
      ->check(CLI::IsMember({"whitespace", "prefix_stem"}))
      ->capture_default_str();
  cmd->add_option("--stopwords", config.stopwords, "Stopword file, one word per line")
      ->check(CLI::ExistingFile);
  cmd->add_option("--stem-vocab", config.stem_vocab,
                  "Vocabulary for prefix_stem mode, one word per line")
      ->check(CLI::ExistingFile);
  cmd->add_option("--labels", config.labels, "Label names in code order")
      ->delimiter(',')
      ->capture_default_str();
  cmd->add_option("--k", config.audac.k, "Number of top biased tokens")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--min-count", config.audac.bounds.min_count,
                  "Smallest record count for a token to be ranked")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--max-count", shared.max_count,
                  "Largest record count for a token to be ranked (default unbounded)");
  cmd->add_option("--threads", config.audac.threads, "Tokenizer threads")
      ->check(CLI::Range(1u, 256u))
      ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Detect and correct token/label artifacts in labeled sentence-pair corpora"};
  app.require_subcommand(1);
  RunConfig config;
  SharedFlags shared;

  CLI::App* analyze = app.add_subcommand("analyze", "Compute per-token bias statistics");
  analyze->add_option("--input", config.input, "Training corpus (.jsonl or .tsv)")
      ->required()
      ->check(CLI::ExistingFile);
  analyze->add_option("--stats-out", config.stats_out, "Per-token statistics CSV")->required();
  analyze->add_option("--topk-out", config.topk_out, "Top-k token list JSON")->required();
  AddShared(analyze, config, shared);

  CLI::App* correct = app.add_subcommand("correct", "Up-sample to remove token/label bias");
  correct->add_option("--input", config.input, "Training corpus (.jsonl or .tsv)")
      ->required()
      ->check(CLI::ExistingFile);
  correct->add_option("--output", config.output, "Corrected corpus (.jsonl or .tsv)")
      ->required();
  correct->add_option("--report-out", config.report_out, "Correction report JSON")
      ->required();
  correct->add_option("--step-size", config.audac.step_size,
                      "Fraction of each deficit filled per pass")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  correct->add_option("--max-iters", config.audac.max_iters, "Maximum passes")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  correct->add_option("--tolerance", config.audac.tolerance,
                      "Per-label deficit accepted as converged")
      ->capture_default_str();
  correct->add_option("--seed", config.audac.seed, "Random seed")->capture_default_str();
  AddShared(correct, config, shared);

  CLI::App* evaluate =
      app.add_subcommand("evaluate", "Score predictions on majority/minority label subsets");
  evaluate->add_option("--test", config.test, "Test corpus (.jsonl or .tsv)")
      ->required()
      ->check(CLI::ExistingFile);
  evaluate->add_option("--predictions", config.predictions, "Predictions (.jsonl or .csv)")
      ->required()
      ->check(CLI::ExistingFile);
  evaluate->add_option("--baseline-predictions", config.baseline_predictions,
                       "Earlier predictions to compare against")
      ->check(CLI::ExistingFile);
  evaluate->add_option("--train-stats", config.train_stats, "Stats CSV of the training data")
      ->required()
      ->check(CLI::ExistingFile);
  evaluate->add_option("--out", config.out, "Per-token accuracy CSV")->required();
  evaluate->add_option("--summary-out", config.summary_out, "Overall accuracy JSON");
  evaluate->add_option("--tokens", config.tokens, "Tokens to score (default: top k)")
      ->delimiter(',');
  AddShared(evaluate, config, shared);

  CLI11_PARSE(app, argc, argv);
  if (shared.max_count) config.audac.bounds.max_count = *shared.max_count;
  config.tokenizer = *artifact_audit::ParseTokenizerMode(shared.tokenizer);

  try {
    if (analyze->parsed()) return artifact_audit::Analyze(config, std::cerr);
    if (correct->parsed()) return artifact_audit::Correct(config, std::cerr);
    return artifact_audit::Evaluate(config, std::cerr);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return artifact_audit::kExitError;
  }
}
