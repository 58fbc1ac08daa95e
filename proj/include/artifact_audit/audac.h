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

// Adaptive up-sampling correction of token/label artifacts.
//
// The k most biased tokens are visited round robin. On each visit, for every
// label whose count trails the token's majority count, a step-size fraction
// of that deficit is filled by duplicating randomly chosen records that carry
// both the token and the label. Deficits of all tokens are refreshed after
// every visit, because a duplicated record usually carries several of the
// corrected tokens at once. The loop ends when every deficit is within
// tolerance or after max_iters passes.

#ifndef ARTIFACT_AUDIT_AUDAC_H_
#define ARTIFACT_AUDIT_AUDAC_H_

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "artifact_audit/artifact_stats.h"
#include "artifact_audit/corpus.h"
#include "artifact_audit/tokenizer.h"

namespace artifact_audit {

struct AudacParams {
  std::size_t k = 10;
  double step_size = 0.2;
  std::size_t max_iters = 50;
  std::uint64_t seed = 42;
  // Largest per-label deficit still counted as converged.
  std::uint64_t tolerance = 0;
  CountBounds bounds;
  // Re-tokenize and recount the grown corpus after every pass and throw
  // std::logic_error if it disagrees with the incrementally tracked counts.
  bool verify_recount = false;
  unsigned threads = 1;

  // Throws std::invalid_argument when a field is out of range.
  void Validate() const;
};

using DeficitMap = std::map<std::string, CountVector>;

// D[s][l] = max(c) - c[l] for each token's label counts c.
// Throws std::invalid_argument if a token is missing from `counts`.
DeficitMap ComputeTargets(std::span<const std::string> tokens,
                          const TokenLabelCounts& counts);
CountVector DeficitOf(const CountVector& counts);

struct TokenIndex {
  // positions[token][label] lists dataset positions, ascending.
  std::map<std::string, std::vector<std::vector<std::size_t>>> positions;
  // Requested tokens that no record contains.
  std::vector<std::string> absent;
};

TokenIndex BuildTokenIndex(const Dataset& dataset, std::span<const std::string> tokens,
                           std::span<const TokenSet> token_sets);
TokenIndex BuildTokenIndex(const Dataset& dataset, std::span<const std::string> tokens,
                           const TokenizerConfig& config);

struct TraceEntry {
  std::size_t iteration = 0;  // 1-based pass number
  std::string token;
  Label label;
  std::uint64_t added = 0;
};

struct TokenOutcome {
  std::string token;
  CountVector initial_counts;
  CountVector final_counts;
  double initial_z_star = 0.0;
  double final_z_star = 0.0;
  // Labels with a deficit but no record to copy from.
  std::vector<Label> unsatisfiable_labels;
};

struct AudacReport {
  AudacParams params;
  std::size_t iterations_run = 0;
  bool converged = false;
  std::size_t initial_size = 0;
  std::size_t final_size = 0;
  // Corrected tokens in visiting order.
  std::vector<TokenOutcome> tokens;
  std::vector<TraceEntry> trace;
  // residuals[i][j]: summed unfrozen deficit of token j after pass i+1.
  std::vector<std::vector<std::uint64_t>> residuals;
  bool insufficient_tokens = false;

  std::uint64_t TotalAdded() const;
  // Compact JSON with a fixed key order.
  std::string ToJson(const LabelSet& labels) const;
};

struct PassView {
  std::size_t iteration = 0;
  const Dataset& corpus;
  // Incrementally tracked label counts of the corrected tokens.
  const std::map<std::string, CountVector>& live_counts;
};

using PassObserver = std::function<void(const PassView&)>;

struct AudacResult {
  Dataset corrected;
  AudacReport report;
};

// The original records form a prefix of `corrected`. Copies get ids
// "<original_id>#dup<k>".
AudacResult RunAudac(const Dataset& dataset, const AudacParams& params,
                     const TokenizerConfig& config,
                     const PassObserver& observer = nullptr);

// Same, with the tokens to correct given explicitly instead of selected by
// z_star.
AudacResult RunAudacOnTokens(const Dataset& dataset, std::vector<std::string> tokens,
                             const AudacParams& params, const TokenizerConfig& config,
                             const PassObserver& observer = nullptr);

}  // namespace artifact_audit

#endif  // ARTIFACT_AUDIT_AUDAC_H_
