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

#include "artifact_audit/evaluation.h"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace artifact_audit {
namespace {

std::string Fixed(std::optional<double> value, int digits) {
  if (!value) return "";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, *value);
  return buf;
}

std::string Percent(std::optional<double> value) {
  return value ? Fixed(*value * 100.0, 3) + "%" : std::string("n/a");
}

std::string Pair(std::optional<double> before, std::optional<double> after) {
  auto show = [](std::optional<double> v) { return v ? Fixed(v, 2) : std::string("n/a"); };
  return "(" + show(before) + ", " + show(after) + ")";
}

void AddPrediction(PredictionSet& set, const LabelSet& labels,
                   const std::filesystem::path& path, std::size_t row,
                   const std::string& id, const std::string& label) {
  const std::string where = path.string() + ":" + std::to_string(row) + ": ";
  if (id.empty()) throw EvaluationError(where + "missing id");
  const std::optional<Label> parsed = labels.Parse(label);
  if (!parsed) throw EvaluationError(where + "unknown label '" + label + "'");
  if (!set.predicted.emplace(id, *parsed).second) {
    throw EvaluationError(where + "duplicate prediction for '" + id + "'");
  }
}

}  // namespace

PredictionSet LoadPredictions(const std::filesystem::path& path, const LabelSet& labels) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw EvaluationError("cannot open " + path.string() + " for reading");
  PredictionSet set;
  set.model_name = path.stem().string();
  std::string line;
  std::size_t row = 0;
  if (path.extension() == ".csv") {
    if (!std::getline(in, line)) throw EvaluationError(path.string() + ": empty file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "id,predicted_label") {
      throw EvaluationError(path.string() + ": expected header id,predicted_label");
    }
    row = 1;
    while (std::getline(in, line)) {
      ++row;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      const std::size_t comma = line.rfind(',');
      if (comma == std::string::npos) {
        throw EvaluationError(path.string() + ":" + std::to_string(row) + ": malformed row");
      }
      AddPrediction(set, labels, path, row, line.substr(0, comma), line.substr(comma + 1));
    }
    return set;
  }
  while (std::getline(in, line)) {
    ++row;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json object;
    try {
      object = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw EvaluationError(path.string() + ":" + std::to_string(row) +
                            ": malformed JSON: " + e.what());
    }
    const auto id = object.find("id");
    const auto label = object.find("predicted_label");
    if (!object.is_object() || id == object.end() || label == object.end() ||
        !id->is_string()) {
      throw EvaluationError(path.string() + ":" + std::to_string(row) +
                            ": expected keys id and predicted_label");
    }
    const std::string label_text =
        label->is_string() ? label->get<std::string>()
        : label->is_number_integer() ? std::to_string(label->get<long long>())
                                     : std::string();
    AddPrediction(set, labels, path, row, id->get<std::string>(), label_text);
  }
  return set;
}

StatsIndex IndexStats(std::span<const TokenStats> stats) {
  StatsIndex index;
  for (const TokenStats& s : stats) index.emplace(s.token, s);
  return index;
}

MajorityMinoritySplit SplitMajorityMinority(const Dataset& test,
                                            std::span<const TokenSet> test_tokens,
                                            const StatsIndex& train_stats,
                                            const std::string& token) {
  const auto it = train_stats.find(token);
  if (it == train_stats.end()) {
    throw EvaluationError("token '" + token + "' has no training statistics");
  }
  const Label majority = it->second.majority_label;
  MajorityMinoritySplit split;
  for (std::size_t i = 0; i < test.size(); ++i) {
    if (!test_tokens[i].contains(token)) continue;
    const Record& r = test.records[i];
    (r.label == majority ? split.majority : split.minority).push_back(&r);
  }
  return split;
}

MajorityMinoritySplit SplitMajorityMinority(const Dataset& test,
                                            const StatsIndex& train_stats,
                                            const std::string& token,
                                            const TokenizerConfig& config) {
  const std::vector<TokenSet> sets = TokenizeDataset(test, config);
  return SplitMajorityMinority(test, sets, train_stats, token);
}

std::optional<double> Accuracy(const PredictionSet& predictions,
                               std::span<const Record* const> subset) {
  if (subset.empty()) return std::nullopt;
  std::size_t correct = 0;
  for (const Record* r : subset) {
    const auto it = predictions.predicted.find(r->id);
    if (it == predictions.predicted.end()) {
      throw EvaluationError("no prediction for record '" + r->id + "'");
    }
    if (it->second == r->label) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(subset.size());
}

std::optional<double> Accuracy(const PredictionSet& predictions,
                               std::span<const Record> subset) {
  std::vector<const Record*> ptrs;
  ptrs.reserve(subset.size());
  for (const Record& r : subset) ptrs.push_back(&r);
  return Accuracy(predictions, ptrs);
}

std::vector<TokenAccuracyRow> TokenAccuracyTable(const Dataset& test,
                                                 const PredictionSet& predictions,
                                                 const StatsIndex& train_stats,
                                                 std::span<const std::string> tokens,
                                                 const TokenizerConfig& config) {
  const std::vector<TokenSet> sets = TokenizeDataset(test, config);
  std::vector<TokenAccuracyRow> rows;
  for (const std::string& token : tokens) {
    MajorityMinoritySplit split = SplitMajorityMinority(test, sets, train_stats, token);
    TokenAccuracyRow row;
    row.token = token;
    row.n_majority = split.majority.size();
    row.n_minority = split.minority.size();
    row.acc_majority = Accuracy(predictions, split.majority);
    row.acc_minority = Accuracy(predictions, split.minority);
    std::vector<const Record*> all = split.majority;
    all.insert(all.end(), split.minority.begin(), split.minority.end());
    row.acc_overall = Accuracy(predictions, all);
    rows.push_back(std::move(row));
  }
  return rows;
}

AccuracySummary SummarizeAccuracy(const Dataset& test, const PredictionSet& predictions,
                                  std::span<const std::string> tokens,
                                  const TokenizerConfig& config) {
  const std::vector<TokenSet> sets = TokenizeDataset(test, config);
  std::vector<const Record*> all;
  std::vector<const Record*> with;
  std::vector<const Record*> without;
  for (std::size_t i = 0; i < test.size(); ++i) {
    const Record* r = &test.records[i];
    all.push_back(r);
    bool hit = false;
    for (const std::string& token : tokens) {
      if (sets[i].contains(token)) {
        hit = true;
        break;
      }
    }
    (hit ? with : without).push_back(r);
  }
  AccuracySummary summary;
  summary.n_total = all.size();
  summary.overall = Accuracy(predictions, all);
  summary.n_with_tokens = with.size();
  summary.with_tokens = Accuracy(predictions, with);
  summary.n_without_tokens = without.size();
  summary.without_tokens = Accuracy(predictions, without);
  return summary;
}

void WriteAccuracyCsv(std::span<const TokenAccuracyRow> rows,
                      const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw EvaluationError("cannot open " + path.string() + " for writing");
  out << "token,n_major,n_minor,acc_major,acc_minor,acc_overall\n";
  for (const TokenAccuracyRow& r : rows) {
    out << r.token << ',' << r.n_majority << ',' << r.n_minority << ','
        << Fixed(r.acc_majority, 6) << ',' << Fixed(r.acc_minority, 6) << ','
        << Fixed(r.acc_overall, 6) << '\n';
  }
  out.flush();
  if (!out) throw EvaluationError("write error on " + path.string());
}

std::string FormatComparisonTable(std::span<const TokenAccuracyRow> before,
                                  std::span<const TokenAccuracyRow> after) {
  if (before.size() != after.size()) {
    throw EvaluationError("comparison needs the same tokens on both sides");
  }
  std::ostringstream out;
  out << "token & accuracy|major & accuracy|minor & overall\n";
  for (std::size_t i = 0; i < before.size(); ++i) {
    if (before[i].token != after[i].token) {
      throw EvaluationError("comparison rows are not aligned at '" + before[i].token + "'");
    }
    out << before[i].token << " & " << Pair(before[i].acc_majority, after[i].acc_majority)
        << " & " << Pair(before[i].acc_minority, after[i].acc_minority) << " & "
        << Pair(before[i].acc_overall, after[i].acc_overall) << '\n';
  }
  return out.str();
}

std::string FormatOverallComparison(const AccuracySummary& before,
                                    const AccuracySummary& after) {
  std::ostringstream out;
  out << "overall accuracy: " << Percent(before.overall) << " -> " << Percent(after.overall)
      << '\n'
      << "with corrected tokens: " << Percent(before.with_tokens) << " -> "
      << Percent(after.with_tokens) << '\n'
      << "without corrected tokens: " << Percent(before.without_tokens) << " -> "
      << Percent(after.without_tokens) << '\n';
  return out.str();
}

}  // namespace artifact_audit
