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

#include <sys/wait.h>

#include <cstdlib>
#include <sstream>

#include "artifact_audit/artifact_stats.h"
#include "doctest.h"
#include "json.hpp"
#include "test_util.h"

namespace artifact_audit {
namespace {

using testing::ReadFile;
using testing::TempDir;

int RunCli(const std::string& args) {
  const std::string cmd = std::string(ARTIFACT_AUDIT_BIN) + " " + args + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string Q(const std::filesystem::path& p) { return "'" + p.string() + "'"; }

TEST_CASE("analyze writes one row per distinct token") {
  TempDir dir;
  const Dataset d = testing::SyntheticCorpus(300, 40, 9);
  WriteDataset(d, dir / "train.jsonl", FileFormat::kJsonl);
  const std::string args = "analyze --input " + Q(dir / "train.jsonl") + " --stats-out " +
                           Q(dir / "s.csv") + " --topk-out " + Q(dir / "top.json") +
                           " --k 5 --min-count 10";
  REQUIRE(RunCli(args) == 0);
  const std::string csv = ReadFile(dir / "s.csv");
  CHECK(static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n')) ==
        testing::BruteForceCounts(d).size() + 1);
  const auto top = nlohmann::json::parse(ReadFile(dir / "top.json"));
  CHECK(top["tokens"].size() == 5);
  CHECK(top["k"] == 5);
  for (std::size_t i = 1; i < top["tokens"].size(); ++i) {
    CHECK(top["tokens"][i - 1]["z_star"].get<double>() >=
          top["tokens"][i]["z_star"].get<double>());
  }

  // Same inputs, same bytes.
  const std::string first = csv + ReadFile(dir / "top.json");
  REQUIRE(RunCli(args) == 0);
  CHECK(ReadFile(dir / "s.csv") + ReadFile(dir / "top.json") == first);
}

TEST_CASE("correct on a planted corpus then analyze the result") {
  TempDir dir;
  const Dataset d = testing::PlantedCorpus("xylophone", {90, 20, 10}, 5);
  WriteDataset(d, dir / "train.tsv", FileFormat::kTsv);
  REQUIRE(RunCli("correct --input " + Q(dir / "train.tsv") + " --output " +
                 Q(dir / "fixed.tsv") + " --report-out " + Q(dir / "r.json") +
                 " --k 1 --min-count 1") == 0);
  const auto report = nlohmann::json::parse(ReadFile(dir / "r.json"));
  CHECK(report["converged"] == true);
  CHECK(report["added"] == 70 + 80);
  const LoadResult fixed = LoadDataset(dir / "fixed.tsv", FileFormat::kTsv);
  CHECK(fixed.dataset.size() == d.size() + 150);

  REQUIRE(RunCli("analyze --input " + Q(dir / "fixed.tsv") + " --stats-out " +
                 Q(dir / "s.csv") + " --topk-out " + Q(dir / "t.json") + " --min-count 1") == 0);
  for (const TokenStats& s : ReadStatsCsv(dir / "s.csv", LabelSet::Snli())) {
    if (s.token == "xylophone") CHECK(s.counts == CountVector{90, 90, 90});
  }
}

TEST_CASE("already uniform corpus passes through unchanged") {
  TempDir dir;
  const Dataset d = testing::PlantedCorpus("zebra", {4, 4, 4}, 1);
  WriteDataset(d, dir / "in.jsonl", FileFormat::kJsonl);
  REQUIRE(RunCli("correct --input " + Q(dir / "in.jsonl") + " --output " + Q(dir / "out.jsonl") +
                 " --report-out " + Q(dir / "r.json") + " --min-count 1") == 0);
  CHECK(ReadFile(dir / "out.jsonl") == ReadFile(dir / "in.jsonl"));
  const auto report = nlohmann::json::parse(ReadFile(dir / "r.json"));
  CHECK(report["trace"].empty());
}

TEST_CASE("non-convergence is a warning with its own exit code") {
  TempDir dir;
  WriteDataset(testing::PlantedCorpus("xylophone", {900, 50, 50}, 0), dir / "in.jsonl",
               FileFormat::kJsonl);
  CHECK(RunCli("correct --input " + Q(dir / "in.jsonl") + " --output " + Q(dir / "out.jsonl") +
               " --report-out " + Q(dir / "r.json") + " --k 1 --min-count 1 --max-iters 2") ==
        kExitNotConverged);
  CHECK(std::filesystem::exists(dir / "out.jsonl"));
  CHECK(nlohmann::json::parse(ReadFile(dir / "r.json"))["converged"] == false);
}

TEST_CASE("evaluate") {
  TempDir dir;
  const Dataset train = testing::PlantedCorpus("xylophone", {30, 5, 5}, 2);
  const Dataset test = testing::PlantedCorpus("xylophone", {6, 3, 1}, 0);
  WriteDataset(train, dir / "train.jsonl", FileFormat::kJsonl);
  WriteDataset(test, dir / "test.jsonl", FileFormat::kJsonl);
  REQUIRE(RunCli("analyze --input " + Q(dir / "train.jsonl") + " --stats-out " +
                 Q(dir / "s.csv") + " --topk-out " + Q(dir / "t.json") + " --min-count 1") == 0);

  std::ostringstream perfect;
  std::ostringstream majority_only;
  for (const Record& r : test.records) {
    perfect << "{\"id\":\"" << r.id << "\",\"predicted_label\":" << r.label.code << "}\n";
    // Always predicts entailment, the training majority for the marker.
    majority_only << "{\"id\":\"" << r.id << "\",\"predicted_label\":\"entailment\"}\n";
  }
  testing::WriteFile(dir / "perfect.jsonl", perfect.str());
  testing::WriteFile(dir / "major.jsonl", majority_only.str());

  REQUIRE(RunCli("evaluate --test " + Q(dir / "test.jsonl") + " --predictions " +
                 Q(dir / "perfect.jsonl") + " --train-stats " + Q(dir / "s.csv") + " --out " +
                 Q(dir / "e.csv") + " --summary-out " + Q(dir / "sum.json") +
                 " --tokens xylophone") == 0);
  CHECK(ReadFile(dir / "e.csv") ==
        "token,n_major,n_minor,acc_major,acc_minor,acc_overall\n"
        "xylophone,6,4,1.000000,1.000000,1.000000\n");
  CHECK(nlohmann::json::parse(ReadFile(dir / "sum.json"))["accuracy"]["overall"] == 1.0);

  REQUIRE(RunCli("evaluate --test " + Q(dir / "test.jsonl") + " --predictions " +
                 Q(dir / "major.jsonl") + " --baseline-predictions " +
                 Q(dir / "perfect.jsonl") + " --train-stats " + Q(dir / "s.csv") + " --out " +
                 Q(dir / "e2.csv") + " --tokens xylophone") == 0);
  CHECK(ReadFile(dir / "e2.csv") ==
        "token,n_major,n_minor,acc_major,acc_minor,acc_overall\n"
        "xylophone,6,4,1.000000,0.000000,0.600000\n");

  // A test id missing from the predictions is an error.
  testing::WriteFile(dir / "partial.jsonl", "{\"id\":\"p0\",\"predicted_label\":0}\n");
  CHECK(RunCli("evaluate --test " + Q(dir / "test.jsonl") + " --predictions " +
               Q(dir / "partial.jsonl") + " --train-stats " + Q(dir / "s.csv") + " --out " +
               Q(dir / "e3.csv") + " --tokens xylophone") == kExitError);
}

TEST_CASE("bad invocations") {
  TempDir dir;
  CHECK(RunCli("") != 0);
  CHECK(RunCli("analyze --input /no/such/file --stats-out x --topk-out y") != 0);
  WriteDataset(testing::PlantedCorpus("zebra", {4, 2, 2}, 0), dir / "in.jsonl",
               FileFormat::kJsonl);
  CHECK(RunCli("correct --input " + Q(dir / "in.jsonl") + " --output " + Q(dir / "o.jsonl") +
               " --report-out " + Q(dir / "r.json") + " --step-size 0") == kExitError);
  CHECK(RunCli("analyze --input " + Q(dir / "in.jsonl") + " --stats-out " + Q(dir / "s.csv") +
               " --topk-out " + Q(dir / "t.json") + " --tokenizer prefix_stem") == kExitError);
}

TEST_CASE("prefix_stem through the library") {
  TempDir dir;
  testing::WriteFile(dir / "vocab.txt", "cat\nball\n");
  RunConfig config;
  config.tokenizer = TokenizerMode::kPrefixStem;
  config.stem_vocab = dir / "vocab.txt";
  const TokenizerConfig tok = MakeTokenizerConfig(config);
  CHECK(TokenizeRecord(testing::MakeRecord("1", "catch the ball", "", 0), tok).tokens ==
        std::vector<std::string>{"ball", "cat"});
}

}  // namespace
}  // namespace artifact_audit
