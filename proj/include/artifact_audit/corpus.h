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

#ifndef ARTIFACT_AUDIT_CORPUS_H_
#define ARTIFACT_AUDIT_CORPUS_H_

#include <compare>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace artifact_audit {

// Raised for anything wrong with an input or output corpus file.
class CorpusError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A class label, identified by its stable integer code within a LabelSet.
struct Label {
  std::size_t code = 0;

  friend auto operator<=>(const Label&, const Label&) = default;
};

// The ordered label vocabulary L of a corpus. Codes are positions in the
// name list, so serialization is stable as long as the list is.
class LabelSet {
 public:
  // entailment=0, neutral=1, contradiction=2.
  static LabelSet Snli();

  // Throws std::invalid_argument on fewer than two names or duplicates.
  explicit LabelSet(std::vector<std::string> names);

  std::size_t size() const { return names_.size(); }
  const std::string& name(Label label) const { return names_.at(label.code); }
  const std::vector<std::string>& names() const { return names_; }

  // Accepts a canonical name or a decimal code.
  std::optional<Label> Parse(std::string_view text) const;

  friend bool operator==(const LabelSet&, const LabelSet&) = default;

 private:
  std::vector<std::string> names_;
};

struct Record {
  std::string id;
  std::string premise;
  std::string hypothesis;
  Label label;

  friend bool operator==(const Record&, const Record&) = default;
};

// Id given to the k-th up-sampled copy (k >= 1) of a record.
std::string DuplicateId(std::string_view original_id, std::size_t k);

// The id of the record a copy was made from; identity for originals.
std::string_view OriginId(std::string_view id);

struct Dataset {
  std::vector<Record> records;
  std::string split_name;
  LabelSet label_set = LabelSet::Snli();

  std::size_t size() const { return records.size(); }
  bool empty() const { return records.empty(); }
};

enum class FileFormat { kJsonl, kTsv };

// Picks the format from the extension: .tsv/.txt are TSV, everything else
// JSONL.
FileFormat FormatFromPath(const std::filesystem::path& path);

struct LoadResult {
  Dataset dataset;
  // Rows dropped because their gold label was "-" or empty.
  std::size_t skipped_unlabeled = 0;
  std::size_t rows_read = 0;
};

// Reads records in file order. Besides the native keys (id, premise,
// hypothesis, label) the SNLI distribution keys pairID, sentence1, sentence2
// and gold_label are understood, for JSONL and TSV alike.
LoadResult LoadDataset(const std::filesystem::path& path, FileFormat format,
                       const LabelSet& labels = LabelSet::Snli(),
                       std::string split_name = "train");

// Writes the native schema. Labels are written by canonical name.
void WriteDataset(const Dataset& dataset, const std::filesystem::path& path,
                  FileFormat format);

}  // namespace artifact_audit

#endif  // ARTIFACT_AUDIT_CORPUS_H_
