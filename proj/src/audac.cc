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

#include "artifact_audit/audac.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "json.hpp"

namespace artifact_audit {
namespace {

using nlohmann::ordered_json;

// null when there is no upper bound.
ordered_json MaxCountJson(const CountBounds& bounds) {
  if (bounds.max_count == CountBounds{}.max_count) return ordered_json();
  return ordered_json(bounds.max_count);
}

// ceil(deficit * step), floored at 1 and capped at the deficit. Products that
// land within rounding noise of an integer are not bumped up by ceil.
std::uint64_t StepDraws(std::uint64_t deficit, double step) {
  const double x = static_cast<double>(deficit) * step;
  const double nearest = std::round(x);
  const double rounded =
      std::abs(x - nearest) <= 1e-9 * std::max(1.0, x) ? nearest : std::ceil(x);
  const auto draws = static_cast<std::uint64_t>(std::max(1.0, rounded));
  return std::min(deficit, draws);
}

ordered_json CountsJson(const CountVector& counts) { return ordered_json(counts); }

class Corrector {
 public:
  Corrector(const Dataset& dataset, std::vector<std::string> tokens,
            const AudacParams& params, const TokenizerConfig& config,
            std::vector<TokenSet> token_sets, const PassObserver& observer)
      : params_(params),
        config_(config),
        observer_(observer),
        tokens_(std::move(tokens)),
        rng_(params.seed) {
    result_.corrected = dataset;
    result_.report.params = params;
    result_.report.initial_size = dataset.size();

    index_ = BuildTokenIndex(dataset, tokens_, token_sets);
    // Which corrected tokens each original record carries.
    membership_.resize(dataset.size());
    const std::size_t num_labels = dataset.label_set.size();
    for (std::size_t t = 0; t < tokens_.size(); ++t) {
      CountVector counts(num_labels, 0);
      const auto& per_label = index_.positions.at(tokens_[t]);
      for (std::size_t l = 0; l < num_labels; ++l) {
        counts[l] = per_label[l].size();
        for (std::size_t pos : per_label[l]) membership_[pos].push_back(t);
      }
      live_[tokens_[t]] = counts;
    }
    dup_counter_.assign(dataset.size(), 0);

    for (const std::string& token : tokens_) {
      TokenOutcome outcome;
      outcome.token = token;
      outcome.initial_counts = live_.at(token);
      outcome.initial_z_star = ZStar(token, outcome.initial_counts);
      const CountVector deficit = DeficitOf(outcome.initial_counts);
      const auto& per_label = index_.positions.at(token);
      for (std::size_t l = 0; l < num_labels; ++l) {
        // A label with no source record keeps a positive deficit forever.
        if (deficit[l] > 0 && per_label[l].empty()) {
          outcome.unsatisfiable_labels.push_back(Label{l});
        }
      }
      result_.report.tokens.push_back(std::move(outcome));
    }
  }

  AudacResult Run() {
    AudacReport& report = result_.report;
    for (std::size_t pass = 1; pass <= params_.max_iters && !Converged(); ++pass) {
      for (std::size_t t = 0; t < tokens_.size(); ++t) SampleToken(pass, t);
      report.iterations_run = pass;
      std::vector<std::uint64_t> residual;
      for (std::size_t t = 0; t < tokens_.size(); ++t) residual.push_back(Residual(t));
      report.residuals.push_back(std::move(residual));
      if (params_.verify_recount) VerifyRecount();
      if (observer_) observer_(PassView{pass, result_.corrected, live_});
    }
    report.converged = Converged();
    report.final_size = result_.corrected.size();
    for (TokenOutcome& outcome : report.tokens) {
      outcome.final_counts = live_.at(outcome.token);
      outcome.final_z_star = ZStar(outcome.token, outcome.final_counts);
    }
    return std::move(result_);
  }

 private:
  static double ZStar(const std::string& token, const CountVector& counts) {
    const bool any = std::any_of(counts.begin(), counts.end(), [](auto c) { return c > 0; });
    return any ? ComputeTokenStats(token, counts).z_star : 0.0;
  }

  bool Frozen(std::size_t t, std::size_t label) const {
    const auto& frozen = result_.report.tokens[t].unsatisfiable_labels;
    return std::find(frozen.begin(), frozen.end(), Label{label}) != frozen.end();
  }

  std::uint64_t Residual(std::size_t t) const {
    const CountVector deficit = DeficitOf(live_.at(tokens_[t]));
    std::uint64_t total = 0;
    for (std::size_t l = 0; l < deficit.size(); ++l) {
      if (!Frozen(t, l)) total += deficit[l];
    }
    return total;
  }

  bool Converged() const {
    for (std::size_t t = 0; t < tokens_.size(); ++t) {
      const CountVector deficit = DeficitOf(live_.at(tokens_[t]));
      for (std::size_t l = 0; l < deficit.size(); ++l) {
        if (!Frozen(t, l) && deficit[l] > params_.tolerance) return false;
      }
    }
    return true;
  }

  void SampleToken(std::size_t pass, std::size_t t) {
    const std::string& token = tokens_[t];
    const CountVector deficit = DeficitOf(live_.at(token));
    const auto& per_label = index_.positions.at(token);
    for (std::size_t l = 0; l < deficit.size(); ++l) {
      if (deficit[l] == 0 || Frozen(t, l)) continue;
      const std::uint64_t draws = StepDraws(deficit[l], params_.step_size);
      const std::vector<std::size_t>& pool = per_label[l];
      std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
      for (std::uint64_t i = 0; i < draws; ++i) AppendCopy(pool[pick(rng_)]);
      result_.report.trace.push_back(TraceEntry{pass, token, Label{l}, draws});
    }
  }

  void AppendCopy(std::size_t original) {
    Dataset& corpus = result_.corrected;
    Record copy = corpus.records[original];
    copy.id = DuplicateId(copy.id, ++dup_counter_[original]);
    const std::size_t label = copy.label.code;
    corpus.records.push_back(std::move(copy));
    for (std::size_t t : membership_[original]) ++live_[tokens_[t]][label];
  }

  void VerifyRecount() const {
    const Dataset& corpus = result_.corrected;
    std::map<std::string, CountVector> recount;
    for (const std::string& token : tokens_) {
      recount[token] = CountVector(corpus.label_set.size(), 0);
    }
    for (const Record& record : corpus.records) {
      const TokenSet set = TokenizeRecord(record, config_);
      for (const std::string& token : tokens_) {
        if (set.contains(token)) ++recount[token][record.label.code];
      }
    }
    if (recount != live_) {
      throw std::logic_error("incremental token counts diverged from a full recount");
    }
  }

  const AudacParams& params_;
  const TokenizerConfig& config_;
  const PassObserver& observer_;
  std::vector<std::string> tokens_;
  std::mt19937_64 rng_;
  TokenIndex index_;
  std::vector<std::vector<std::size_t>> membership_;
  std::map<std::string, CountVector> live_;
  std::vector<std::size_t> dup_counter_;
  AudacResult result_;
};

}  // namespace

void AudacParams::Validate() const {
  if (k < 1) throw std::invalid_argument("k must be at least 1");
  if (!(step_size > 0.0 && step_size <= 1.0)) {
    throw std::invalid_argument("step size must be in (0, 1]");
  }
  if (max_iters < 1) throw std::invalid_argument("max iterations must be at least 1");
  if (bounds.min_count < 1 || bounds.max_count < bounds.min_count) {
    throw std::invalid_argument("invalid count bounds");
  }
}

CountVector DeficitOf(const CountVector& counts) {
  const std::uint64_t top = counts.empty() ? 0 : *std::max_element(counts.begin(), counts.end());
  CountVector deficit(counts.size());
  for (std::size_t l = 0; l < counts.size(); ++l) deficit[l] = top - counts[l];
  return deficit;
}

DeficitMap ComputeTargets(std::span<const std::string> tokens,
                          const TokenLabelCounts& counts) {
  DeficitMap targets;
  for (const std::string& token : tokens) {
    auto it = counts.counts.find(token);
    if (it == counts.counts.end()) {
      throw std::invalid_argument("token '" + token + "' has no counts");
    }
    targets[token] = DeficitOf(it->second);
  }
  return targets;
}

TokenIndex BuildTokenIndex(const Dataset& dataset, std::span<const std::string> tokens,
                           std::span<const TokenSet> token_sets) {
  if (tokens.empty()) throw std::invalid_argument("no tokens to index");
  if (token_sets.size() != dataset.size()) {
    throw std::invalid_argument("token sets do not match dataset size");
  }
  TokenIndex index;
  const std::size_t num_labels = dataset.label_set.size();
  for (const std::string& token : tokens) {
    index.positions.try_emplace(token, num_labels);
  }
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    const std::size_t label = dataset.records[i].label.code;
    for (const std::string& token : token_sets[i].tokens) {
      auto it = index.positions.find(token);
      if (it != index.positions.end()) it->second[label].push_back(i);
    }
  }
  for (const std::string& token : tokens) {
    const auto& per_label = index.positions.at(token);
    const bool empty = std::all_of(per_label.begin(), per_label.end(),
                                   [](const auto& v) { return v.empty(); });
    if (empty && std::find(index.absent.begin(), index.absent.end(), token) ==
                     index.absent.end()) {
      index.absent.push_back(token);
    }
  }
  return index;
}

TokenIndex BuildTokenIndex(const Dataset& dataset, std::span<const std::string> tokens,
                           const TokenizerConfig& config) {
  const std::vector<TokenSet> sets = TokenizeDataset(dataset, config);
  return BuildTokenIndex(dataset, tokens, sets);
}

std::uint64_t AudacReport::TotalAdded() const {
  std::uint64_t total = 0;
  for (const TraceEntry& e : trace) total += e.added;
  return total;
}

std::string AudacReport::ToJson(const LabelSet& labels) const {
  ordered_json doc;
  ordered_json p;
  p["k"] = params.k;
  p["step_size"] = params.step_size;
  p["max_iters"] = params.max_iters;
  p["tolerance"] = params.tolerance;
  p["seed"] = params.seed;
  p["min_count"] = params.bounds.min_count;
  p["max_count"] = MaxCountJson(params.bounds);
  doc["params"] = p;
  doc["converged"] = converged;
  doc["iterations_run"] = iterations_run;
  doc["initial_size"] = initial_size;
  doc["final_size"] = final_size;
  doc["added"] = TotalAdded();
  doc["growth"] = initial_size == 0 ? 0.0
                                    : static_cast<double>(final_size - initial_size) /
                                          static_cast<double>(initial_size);
  doc["insufficient_tokens"] = insufficient_tokens;

  ordered_json token_list = ordered_json::array();
  ordered_json unsatisfiable = ordered_json::array();
  for (const TokenOutcome& t : tokens) {
    ordered_json entry;
    entry["token"] = t.token;
    entry["initial_counts"] = CountsJson(t.initial_counts);
    entry["final_counts"] = CountsJson(t.final_counts);
    entry["initial_z_star"] = t.initial_z_star;
    entry["final_z_star"] = t.final_z_star;
    ordered_json frozen = ordered_json::array();
    for (Label l : t.unsatisfiable_labels) frozen.push_back(labels.name(l));
    entry["unsatisfiable_labels"] = frozen;
    if (!t.unsatisfiable_labels.empty()) unsatisfiable.push_back(t.token);
    token_list.push_back(std::move(entry));
  }
  doc["tokens"] = std::move(token_list);
  doc["unsatisfiable_tokens"] = std::move(unsatisfiable);

  ordered_json trace_list = ordered_json::array();
  for (const TraceEntry& e : trace) {
    trace_list.push_back(ordered_json{{"iteration", e.iteration},
                                      {"token", e.token},
                                      {"label", labels.name(e.label)},
                                      {"added", e.added}});
  }
  doc["trace"] = std::move(trace_list);
  doc["residuals"] = residuals;
  return doc.dump(2) + "\n";
}

AudacResult RunAudacOnTokens(const Dataset& dataset, std::vector<std::string> tokens,
                             const AudacParams& params, const TokenizerConfig& config,
                             const PassObserver& observer) {
  params.Validate();
  if (dataset.empty()) throw CorpusError("empty dataset");
  if (tokens.empty()) throw std::invalid_argument("no tokens to correct");
  std::vector<std::string> unique;
  for (std::string& token : tokens) {
    if (std::find(unique.begin(), unique.end(), token) == unique.end()) {
      unique.push_back(std::move(token));
    }
  }
  tokens = std::move(unique);
  std::vector<TokenSet> sets = TokenizeDataset(dataset, config, params.threads);
  return Corrector(dataset, std::move(tokens), params, config, std::move(sets), observer)
      .Run();
}

AudacResult RunAudac(const Dataset& dataset, const AudacParams& params,
                     const TokenizerConfig& config, const PassObserver& observer) {
  params.Validate();
  if (dataset.empty()) throw CorpusError("empty dataset");
  std::vector<TokenSet> sets = TokenizeDataset(dataset, config, params.threads);
  const std::vector<TokenStats> stats = ComputeStats(CountTokenLabels(dataset, sets));
  const TopTokens top = TopBiasedTokens(stats, params.k, params.bounds);
  if (top.tokens.empty()) {
    AudacResult result;
    result.corrected = dataset;
    result.report.params = params;
    result.report.converged = true;
    result.report.initial_size = result.report.final_size = dataset.size();
    result.report.insufficient_tokens = true;
    return result;
  }
  AudacResult result =
      Corrector(dataset, top.tokens, params, config, std::move(sets), observer).Run();
  result.report.insufficient_tokens = top.insufficient;
  return result;
}

}  // namespace artifact_audit
