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

#include <random>

#include "doctest.h"
#include "test_util.h"

namespace artifact_audit {
namespace {

using testing::MakeDataset;
using testing::MakeRecord;

StatsIndex TrainStats(std::initializer_list<std::pair<std::string, CountVector>> rows) {
  std::vector<TokenStats> stats;
  for (const auto& [token, counts] : rows) stats.push_back(ComputeTokenStats(token, counts));
  return IndexStats(stats);
}

// Gold labels C,C,E,N,C for records holding "nobody", plus two without it.
Dataset NobodyTest() {
  return MakeDataset({MakeRecord("t0", "Nobody sits.", "", 2), MakeRecord("t1", "nobody", "", 2),
                      MakeRecord("t2", "", "Nobody runs", 0), MakeRecord("t3", "nobody", "x", 1),
                      MakeRecord("t4", "nobody!", "", 2), MakeRecord("t5", "A dog.", "", 0),
                      MakeRecord("t6", "A cat.", "", 1)});
}

PredictionSet Predict(const Dataset& d, const std::function<std::size_t(const Record&)>& f) {
  PredictionSet p;
  for (const Record& r : d.records) p.predicted[r.id] = Label{f(r)};
  return p;
}

TEST_CASE("split_majority_minority") {
  const Dataset test = NobodyTest();
  const StatsIndex train = TrainStats({{"nobody", {1, 0, 99}}, {"unicorn", {5, 1, 1}}});
  const TokenizerConfig config;
  const MajorityMinoritySplit split = SplitMajorityMinority(test, train, "nobody", config);
  CHECK(split.majority.size() == 3);
  CHECK(split.minority.size() == 2);
  for (const Record* r : split.majority) CHECK(r->label == Label{2});

  const MajorityMinoritySplit none = SplitMajorityMinority(test, train, "unicorn", config);
  CHECK(none.majority.empty());
  CHECK(none.minority.empty());
  CHECK_THROWS_AS(SplitMajorityMinority(test, train, "missing", config), EvaluationError);
}

TEST_CASE("majority label comes from training statistics") {
  // In test "nobody" is mostly contradiction, but training says entailment.
  const StatsIndex train = TrainStats({{"nobody", {50, 10, 10}}});
  const MajorityMinoritySplit split =
      SplitMajorityMinority(NobodyTest(), train, "nobody", TokenizerConfig{});
  CHECK(split.majority.size() == 1);
  CHECK(split.minority.size() == 4);
}

TEST_CASE("accuracy") {
  const Dataset d = MakeDataset({MakeRecord("a", "", "", 0), MakeRecord("b", "", "", 1),
                                 MakeRecord("c", "", "", 2), MakeRecord("e", "", "", 0)});
  const PredictionSet perfect = Predict(d, [](const Record& r) { return r.label.code; });
  CHECK(Accuracy(perfect, std::span<const Record>(d.records)) == 1.0);
  PredictionSet one = Predict(d, [](const Record&) { return std::size_t{1}; });
  CHECK(Accuracy(one, std::span<const Record>(d.records)) == 0.25);
  CHECK_FALSE(Accuracy(one, std::span<const Record>()));
  one.predicted.erase("c");
  CHECK_THROWS_AS(Accuracy(one, std::span<const Record>(d.records)), EvaluationError);
}

TEST_CASE("accuracy ignores record order") {
  Dataset d = testing::SyntheticCorpus(200, 20, 4);
  std::mt19937 rng(8);
  const PredictionSet p = Predict(d, [&](const Record&) { return std::size_t{rng() % 3}; });
  const auto before = Accuracy(p, std::span<const Record>(d.records));
  std::shuffle(d.records.begin(), d.records.end(), rng);
  CHECK(Accuracy(p, std::span<const Record>(d.records)) == before);
}

TEST_CASE("majority-only predictor") {
  const Dataset test = testing::SyntheticCorpus(600, 25, 21);
  const std::vector<TokenStats> stats =
      ComputeStats(CountTokenLabels(testing::SyntheticCorpus(2000, 25, 22), TokenizerConfig{}));
  const StatsIndex train = IndexStats(stats);
  std::vector<std::string> tokens;
  for (int i = 0; i < 25; i += 3) tokens.push_back("w" + std::to_string(i));

  // Right on one token's majority-label records, wrong on everything else.
  for (const std::string& token : tokens) {
    const Label majority = train.at(token).majority_label;
    const std::vector<TokenSet> sets = TokenizeDataset(test, TokenizerConfig{});
    PredictionSet p;
    for (std::size_t i = 0; i < test.size(); ++i) {
      const Record& r = test.records[i];
      const bool right = sets[i].contains(token) && r.label == majority;
      p.predicted[r.id] = right ? r.label : Label{(r.label.code + 1) % 3};
    }
    const std::string one[] = {token};
    const auto rows = TokenAccuracyTable(test, p, train, one, TokenizerConfig{});
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].acc_majority == 1.0);
    CHECK(rows[0].acc_minority == 0.0);
    const double identity = *rows[0].acc_overall * (rows[0].n_majority + rows[0].n_minority) -
                            (*rows[0].acc_majority * rows[0].n_majority +
                             *rows[0].acc_minority * rows[0].n_minority);
    CHECK(std::abs(identity) < 1e-9);
  }
}

TEST_CASE("all-correct and identical predictions") {
  const Dataset test = NobodyTest();
  const StatsIndex train = TrainStats({{"nobody", {1, 0, 99}}, {"dog", {3, 3, 4}}});
  const PredictionSet perfect = Predict(test, [](const Record& r) { return r.label.code; });
  const std::vector<std::string> tokens = {"nobody", "dog"};
  const auto rows = TokenAccuracyTable(test, perfect, train, tokens, TokenizerConfig{});
  CHECK(rows[0].acc_overall == 1.0);
  CHECK(rows[0].acc_majority == 1.0);
  CHECK(rows[0].acc_minority == 1.0);
  // "dog" appears once with gold entailment; its training majority is contradiction.
  CHECK(rows[1].n_majority == 0);
  CHECK_FALSE(rows[1].acc_majority);
  CHECK(rows[1].acc_minority == 1.0);

  const auto again = TokenAccuracyTable(test, perfect, train, tokens, TokenizerConfig{});
  CHECK(FormatComparisonTable(rows, again) ==
        "token & accuracy|major & accuracy|minor & overall\n"
        "nobody & (1.00, 1.00) & (1.00, 1.00) & (1.00, 1.00)\n"
        "dog & (n/a, n/a) & (1.00, 1.00) & (1.00, 1.00)\n");

  const AccuracySummary summary = SummarizeAccuracy(test, perfect, tokens, TokenizerConfig{});
  CHECK(summary.overall == 1.0);
  CHECK(summary.n_with_tokens == 6);
  CHECK(summary.n_without_tokens == 1);
}

TEST_CASE("comparison formatting") {
  TokenAccuracyRow before{"sleeping", 100, 40, 0.98, 0.85, 0.95};
  TokenAccuracyRow after{"sleeping", 100, 40, 0.97, 0.89, 0.95};
  const TokenAccuracyRow b[] = {before};
  const TokenAccuracyRow a[] = {after};
  CHECK(FormatComparisonTable(b, a) ==
        "token & accuracy|major & accuracy|minor & overall\n"
        "sleeping & (0.98, 0.97) & (0.85, 0.89) & (0.95, 0.95)\n");
  after.token = "other";
  const TokenAccuracyRow misaligned[] = {after};
  CHECK_THROWS_AS(FormatComparisonTable(b, misaligned), EvaluationError);

  AccuracySummary s0;
  s0.overall = 0.89149;
  s0.with_tokens = 0.9294;
  AccuracySummary s1;
  s1.overall = 0.89667;
  s1.with_tokens = 0.9323;
  CHECK(FormatOverallComparison(s0, s1) ==
        "overall accuracy: 89.149% -> 89.667%\n"
        "with corrected tokens: 92.940% -> 93.230%\n"
        "without corrected tokens: n/a -> n/a\n");
}

TEST_CASE("prediction files") {
  testing::TempDir dir;
  const LabelSet labels = LabelSet::Snli();
  testing::WriteFile(dir / "p.jsonl",
                     "{\"id\":\"a\",\"predicted_label\":\"neutral\"}\n"
                     "{\"id\":\"b\",\"predicted_label\":2}\n");
  PredictionSet p = LoadPredictions(dir / "p.jsonl", labels);
  CHECK(p.predicted.at("a") == Label{1});
  CHECK(p.predicted.at("b") == Label{2});
  CHECK(p.model_name == "p");

  testing::WriteFile(dir / "p.csv", "id,predicted_label\na,entailment\nb,1\n");
  p = LoadPredictions(dir / "p.csv", labels);
  CHECK(p.predicted.at("a") == Label{0});
  CHECK(p.predicted.at("b") == Label{1});

  testing::WriteFile(dir / "bad.csv", "id,label\n");
  CHECK_THROWS_AS(LoadPredictions(dir / "bad.csv", labels), EvaluationError);
  testing::WriteFile(dir / "dup.jsonl",
                     "{\"id\":\"a\",\"predicted_label\":0}\n"
                     "{\"id\":\"a\",\"predicted_label\":1}\n");
  CHECK_THROWS_AS(LoadPredictions(dir / "dup.jsonl", labels), EvaluationError);
  testing::WriteFile(dir / "unk.jsonl", "{\"id\":\"a\",\"predicted_label\":\"maybe\"}\n");
  CHECK_THROWS_AS(LoadPredictions(dir / "unk.jsonl", labels), EvaluationError);
}

TEST_CASE("accuracy csv") {
  testing::TempDir dir;
  const std::vector<TokenAccuracyRow> rows = {{"cat", 4, 0, 0.75, std::nullopt, 0.75}};
  WriteAccuracyCsv(rows, dir / "e.csv");
  CHECK(testing::ReadFile(dir / "e.csv") ==
        "token,n_major,n_minor,acc_major,acc_minor,acc_overall\n"
        "cat,4,0,0.750000,,0.750000\n");
}

}  // namespace
}  // namespace artifact_audit
