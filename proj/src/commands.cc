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

#include "artifact_audit/commands.h"

#include <algorithm>
#include <fstream>
#include <stdexcept>

#include "artifact_audit/artifact_stats.h"
#include "artifact_audit/corpus.h"
#include "artifact_audit/evaluation.h"
#include "json.hpp"

namespace artifact_audit {
namespace {

using nlohmann::ordered_json;

// null when there is no upper bound.
ordered_json MaxCountJson(const CountBounds& bounds) {
  if (bounds.max_count == CountBounds{}.max_count) return ordered_json();
  return ordered_json(bounds.max_count);
}

void Require(const std::filesystem::path& path, const char* flag) {
  if (path.empty()) throw std::invalid_argument(std::string(flag) + " is required");
}

void WriteText(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << text;
  out.flush();
  if (!out) throw std::runtime_error("write error on " + path.string());
}

Dataset Load(const std::filesystem::path& path, const LabelSet& labels,
             const std::string& split, std::ostream& log) {
  LoadResult loaded = LoadDataset(path, FormatFromPath(path), labels, split);
  log << "loaded " << loaded.dataset.size() << " records from " << path.string();
  if (loaded.skipped_unlabeled > 0) {
    log << " (skipped " << loaded.skipped_unlabeled << " without a gold label)";
  }
  log << '\n';
  return std::move(loaded.dataset);
}

std::string TopKJson(const std::vector<TokenStats>& stats, const TopTokens& top,
                     const RunConfig& config, const LabelSet& labels) {
  const StatsIndex index = IndexStats(stats);
  ordered_json doc;
  doc["k"] = config.audac.k;
  doc["min_count"] = config.audac.bounds.min_count;
  doc["max_count"] = MaxCountJson(config.audac.bounds);
  doc["tokenizer"] = std::string(TokenizerModeName(config.tokenizer));
  doc["insufficient"] = top.insufficient;
  ordered_json list = ordered_json::array();
  for (const std::string& token : top.tokens) {
    const TokenStats& s = index.at(token);
    list.push_back(ordered_json{{"token", s.token},
                                {"n", s.n},
                                {"counts", s.counts},
                                {"p_star", s.p_star},
                                {"z_star", s.z_star},
                                {"majority_label", labels.name(s.majority_label)}});
  }
  doc["tokens"] = std::move(list);
  return doc.dump(2) + "\n";
}

ordered_json SummaryJson(const AccuracySummary& s) {
  auto opt = [](std::optional<double> v) { return v ? ordered_json(*v) : ordered_json(); };
  return ordered_json{{"n_total", s.n_total},
                      {"overall", opt(s.overall)},
                      {"n_with_tokens", s.n_with_tokens},
                      {"with_tokens", opt(s.with_tokens)},
                      {"n_without_tokens", s.n_without_tokens},
                      {"without_tokens", opt(s.without_tokens)}};
}

}  // namespace

LabelSet MakeLabelSet(const RunConfig& config) { return LabelSet(config.labels); }

TokenizerConfig MakeTokenizerConfig(const RunConfig& config) {
  TokenizerConfig tok;
  tok.mode = config.tokenizer;
  if (!config.stopwords.empty()) tok.stopwords = LoadWordList(config.stopwords);
  if (config.tokenizer == TokenizerMode::kPrefixStem) {
    Require(config.stem_vocab, "--stem-vocab (for --tokenizer prefix_stem)");
    tok.stem_vocabulary = LoadWordList(config.stem_vocab);
    if (tok.stem_vocabulary.empty()) throw std::invalid_argument("stem vocabulary is empty");
  }
  return tok;
}

int Analyze(const RunConfig& config, std::ostream& log) {
  Require(config.input, "--input");
  Require(config.stats_out, "--stats-out");
  Require(config.topk_out, "--topk-out");
  config.audac.Validate();
  const LabelSet labels = MakeLabelSet(config);
  const TokenizerConfig tok = MakeTokenizerConfig(config);
  const Dataset dataset = Load(config.input, labels, "train", log);

  const std::vector<TokenStats> stats =
      ComputeStats(CountTokenLabels(dataset, tok, config.audac.threads));
  WriteStatsCsv(stats, labels, config.stats_out);
  const TopTokens top = TopBiasedTokens(stats, config.audac.k, config.audac.bounds);
  WriteText(config.topk_out, TopKJson(stats, top, config, labels));

  const auto highest = std::max_element(
      stats.begin(), stats.end(),
      [](const TokenStats& a, const TokenStats& b) { return a.z_star < b.z_star; });
  log << stats.size() << " tokens; highest z*: " << highest->token << " (z*="
      << highest->z_star << ", p*=" << highest->p_star << ", n=" << highest->n << ", "
      << labels.name(highest->majority_label) << ")\n";
  if (top.insufficient) {
    log << "warning: only " << top.tokens.size() << " tokens within the count bounds\n";
  }
  return kExitOk;
}

int Correct(const RunConfig& config, std::ostream& log) {
  Require(config.input, "--input");
  Require(config.output, "--output");
  Require(config.report_out, "--report-out");
  config.audac.Validate();
  const LabelSet labels = MakeLabelSet(config);
  const TokenizerConfig tok = MakeTokenizerConfig(config);
  const Dataset dataset = Load(config.input, labels, "train", log);

  const AudacResult result = RunAudac(dataset, config.audac, tok);
  const AudacReport& report = result.report;
  // The report goes out first so a failed dataset write still leaves it.
  WriteText(config.report_out, report.ToJson(labels));
  WriteDataset(result.corrected, config.output, FormatFromPath(config.output));

  log << "corrected " << report.tokens.size() << " tokens in " << report.iterations_run
      << " passes: " << report.initial_size << " -> " << report.final_size << " records (+"
      << report.TotalAdded() << ")\n";
  for (const TokenOutcome& t : report.tokens) {
    if (!t.unsatisfiable_labels.empty()) {
      log << "warning: token '" << t.token << "' has labels with no record to copy\n";
    }
  }
  if (report.insufficient_tokens) {
    log << "warning: fewer than " << config.audac.k << " tokens within the count bounds\n";
  }
  if (!report.converged) {
    log << "warning: not converged after " << config.audac.max_iters << " passes\n";
    return kExitNotConverged;
  }
  return kExitOk;
}

int Evaluate(const RunConfig& config, std::ostream& log) {
  Require(config.test, "--test");
  Require(config.predictions, "--predictions");
  Require(config.train_stats, "--train-stats");
  Require(config.out, "--out");
  const LabelSet labels = MakeLabelSet(config);
  const TokenizerConfig tok = MakeTokenizerConfig(config);
  const Dataset test = Load(config.test, labels, "test", log);
  const std::vector<TokenStats> train = ReadStatsCsv(config.train_stats, labels);
  const StatsIndex train_index = IndexStats(train);

  std::vector<std::string> tokens = config.tokens;
  if (tokens.empty()) {
    config.audac.Validate();
    tokens = TopBiasedTokens(train, config.audac.k, config.audac.bounds).tokens;
  }

  const PredictionSet predictions = LoadPredictions(config.predictions, labels);
  const std::vector<TokenAccuracyRow> rows =
      TokenAccuracyTable(test, predictions, train_index, tokens, tok);
  WriteAccuracyCsv(rows, config.out);
  const AccuracySummary summary = SummarizeAccuracy(test, predictions, tokens, tok);

  ordered_json doc;
  doc["model"] = predictions.model_name;
  doc["tokens"] = tokens;
  doc["accuracy"] = SummaryJson(summary);

  if (!config.baseline_predictions.empty()) {
    const PredictionSet baseline = LoadPredictions(config.baseline_predictions, labels);
    const std::vector<TokenAccuracyRow> before =
        TokenAccuracyTable(test, baseline, train_index, tokens, tok);
    const AccuracySummary before_summary = SummarizeAccuracy(test, baseline, tokens, tok);
    doc["baseline_model"] = baseline.model_name;
    doc["baseline_accuracy"] = SummaryJson(before_summary);
    log << FormatOverallComparison(before_summary, summary)
        << FormatComparisonTable(before, rows);
  } else if (summary.overall) {
    log << "overall accuracy: " << *summary.overall * 100.0 << "% over " << summary.n_total
        << " records\n";
  }
  if (!config.summary_out.empty()) WriteText(config.summary_out, doc.dump(2) + "\n");
  return kExitOk;
}

}  // namespace artifact_audit
