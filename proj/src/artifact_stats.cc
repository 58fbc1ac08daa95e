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

#include "artifact_audit/artifact_stats.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace artifact_audit {
namespace {

std::string FormatDouble(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

std::vector<std::string> SplitCsvLine(const std::string& line) {
  std::vector<std::string> fields;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

}  // namespace

void TokenLabelCounts::Merge(const TokenLabelCounts& other) {
  if (num_labels == 0) num_labels = other.num_labels;
  if (other.num_labels != num_labels) {
    throw std::invalid_argument("cannot merge counts over different label sets");
  }
  total_records += other.total_records;
  for (const auto& [token, vec] : other.counts) {
    CountVector& mine = counts[token];
    if (mine.empty()) mine.assign(num_labels, 0);
    for (std::size_t l = 0; l < num_labels; ++l) mine[l] += vec[l];
  }
}

std::vector<TokenSet> TokenizeDataset(const Dataset& dataset,
                                      const TokenizerConfig& config,
                                      unsigned threads) {
  std::vector<TokenSet> sets(dataset.size());
  const std::size_t workers =
      std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(1, dataset.size() / 1024));
  if (workers == 1) {
    for (std::size_t i = 0; i < dataset.size(); ++i) {
      sets[i] = TokenizeRecord(dataset.records[i], config);
    }
    return sets;
  }
  std::vector<std::thread> pool;
  const std::size_t chunk = (dataset.size() + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      const std::size_t end = std::min(dataset.size(), (w + 1) * chunk);
      for (std::size_t i = w * chunk; i < end; ++i) {
        sets[i] = TokenizeRecord(dataset.records[i], config);
      }
    });
  }
  for (std::thread& t : pool) t.join();
  return sets;
}

TokenLabelCounts CountTokenLabels(const Dataset& dataset,
                                  std::span<const TokenSet> token_sets) {
  if (dataset.empty()) throw CorpusError("empty dataset");
  if (token_sets.size() != dataset.size()) {
    throw std::invalid_argument("token sets do not match dataset size");
  }
  TokenLabelCounts result;
  result.num_labels = dataset.label_set.size();
  result.total_records = dataset.size();
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    const std::size_t label = dataset.records[i].label.code;
    for (const std::string& token : token_sets[i].tokens) {
      CountVector& vec = result.counts[token];
      if (vec.empty()) vec.assign(result.num_labels, 0);
      ++vec[label];
    }
  }
  return result;
}

TokenLabelCounts CountTokenLabels(const Dataset& dataset,
                                  const TokenizerConfig& config, unsigned threads) {
  if (dataset.empty()) throw CorpusError("empty dataset");
  const std::vector<TokenSet> sets = TokenizeDataset(dataset, config, threads);
  return CountTokenLabels(dataset, sets);
}

TokenStats ComputeTokenStats(std::string token, const CountVector& counts) {
  const std::size_t num_labels = counts.size();
  if (num_labels < 2) throw std::invalid_argument("need at least two labels");
  const std::uint64_t n = std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
  if (n == 0) throw std::invalid_argument("token '" + token + "' has zero occurrences");

  TokenStats s;
  s.token = std::move(token);
  s.n = n;
  s.counts = counts;
  s.p_hat.resize(num_labels);
  const double null_p = 1.0 / static_cast<double>(num_labels);
  const double stderr_null = std::sqrt(null_p * (1.0 - null_p) / static_cast<double>(n));
  std::size_t best = 0;
  for (std::size_t l = 0; l < num_labels; ++l) {
    s.p_hat[l] = static_cast<double>(counts[l]) / static_cast<double>(n);
    if (counts[l] > counts[best]) best = l;
  }
  s.majority_label = Label{best};
  s.p_star = s.p_hat[best];
  // The largest p_hat gives the largest standardized deviation.
  s.z_star = (s.p_star - null_p) / stderr_null;
  return s;
}

std::vector<TokenStats> ComputeStats(const TokenLabelCounts& counts) {
  if (counts.counts.empty()) throw std::invalid_argument("no token counts");
  std::vector<const std::string*> tokens;
  tokens.reserve(counts.counts.size());
  for (const auto& entry : counts.counts) tokens.push_back(&entry.first);
  std::sort(tokens.begin(), tokens.end(),
            [](const std::string* a, const std::string* b) { return *a < *b; });
  std::vector<TokenStats> stats;
  stats.reserve(tokens.size());
  for (const std::string* token : tokens) {
    stats.push_back(ComputeTokenStats(*token, counts.counts.at(*token)));
  }
  return stats;
}

TopTokens TopBiasedTokens(std::span<const TokenStats> stats, std::size_t k,
                          const CountBounds& bounds) {
  if (k == 0) throw std::invalid_argument("k must be at least 1");
  if (bounds.min_count == 0 || bounds.max_count < bounds.min_count) {
    throw std::invalid_argument("invalid count bounds");
  }
  std::vector<const TokenStats*> eligible;
  for (const TokenStats& s : stats) {
    if (s.n >= bounds.min_count && s.n <= bounds.max_count) eligible.push_back(&s);
  }
  auto before = [](const TokenStats* a, const TokenStats* b) {
    if (a->z_star != b->z_star) return a->z_star > b->z_star;
    if (a->n != b->n) return a->n > b->n;
    return a->token < b->token;
  };
  TopTokens top;
  top.insufficient = eligible.size() < k;
  const std::size_t take = std::min(k, eligible.size());
  std::partial_sort(eligible.begin(), eligible.begin() + static_cast<std::ptrdiff_t>(take),
                    eligible.end(), before);
  for (std::size_t i = 0; i < take; ++i) top.tokens.push_back(eligible[i]->token);
  return top;
}

void WriteStatsCsv(std::span<const TokenStats> stats, const LabelSet& labels,
                   const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << "token,n";
  for (std::size_t l = 0; l < labels.size(); ++l) out << ",count_" << l;
  out << ",p_star,z_star,majority_label\n";
  for (const TokenStats& s : stats) {
    if (s.counts.size() != labels.size()) {
      throw std::invalid_argument("stats label count does not match label set");
    }
    out << s.token << ',' << s.n;
    for (std::uint64_t c : s.counts) out << ',' << c;
    out << ',' << FormatDouble(s.p_star) << ',' << FormatDouble(s.z_star) << ','
        << labels.name(s.majority_label) << '\n';
  }
  out.flush();
  if (!out) throw std::runtime_error("write error on " + path.string());
}

std::vector<TokenStats> ReadStatsCsv(const std::filesystem::path& path,
                                     const LabelSet& labels) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string() + " for reading");
  const std::size_t columns = labels.size() + 5;
  std::string line;
  if (!std::getline(in, line) || SplitCsvLine(line).size() != columns ||
      line.rfind("token,n,", 0) != 0) {
    throw std::runtime_error(path.string() + ": not a stats CSV for " +
                             std::to_string(labels.size()) + " labels");
  }
  std::vector<TokenStats> stats;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::vector<std::string> fields = SplitCsvLine(line);
    if (fields.size() != columns) {
      throw std::runtime_error(path.string() + ":" + std::to_string(row) +
                               ": wrong column count");
    }
    CountVector counts(labels.size());
    for (std::size_t l = 0; l < labels.size(); ++l) {
      const std::string& f = fields[2 + l];
      const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), counts[l]);
      if (ec != std::errc() || ptr != f.data() + f.size()) {
        throw std::runtime_error(path.string() + ":" + std::to_string(row) +
                                 ": bad count '" + f + "'");
      }
    }
    stats.push_back(ComputeTokenStats(fields[0], counts));
  }
  return stats;
}

}  // namespace artifact_audit
