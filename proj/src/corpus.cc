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

#include "artifact_audit/corpus.h"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <unordered_set>

#include "json.hpp"

namespace artifact_audit {
namespace {

using nlohmann::json;

constexpr std::string_view kDupMarker = "#dup";

std::string RowError(const std::filesystem::path& path, std::size_t row,
                     std::string_view what) {
  return path.string() + ":" + std::to_string(row) + ": " + std::string(what);
}

bool IsUnlabeled(std::string_view label) { return label.empty() || label == "-"; }

std::vector<std::string_view> SplitTabs(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}

// First key of `keys` present in `object` as a string (or number for labels).
std::optional<std::string> JsonField(const json& object,
                                     std::initializer_list<const char*> keys) {
  for (const char* key : keys) {
    auto it = object.find(key);
    if (it == object.end() || it->is_null()) continue;
    if (it->is_string()) return it->get<std::string>();
    if (it->is_number_integer()) return std::to_string(it->get<long long>());
  }
  return std::nullopt;
}

class Loader {
 public:
  Loader(const std::filesystem::path& path, const LabelSet& labels,
         LoadResult& result)
      : path_(path), labels_(labels), result_(result) {}

  void Add(std::size_t row, std::optional<std::string> id,
           std::optional<std::string> premise,
           std::optional<std::string> hypothesis,
           std::optional<std::string> label) {
    ++result_.rows_read;
    if (!label) throw CorpusError(RowError(path_, row, "missing label"));
    if (IsUnlabeled(*label)) {
      ++result_.skipped_unlabeled;
      return;
    }
    if (!id || id->empty()) throw CorpusError(RowError(path_, row, "missing id"));
    if (!premise || !hypothesis) {
      throw CorpusError(RowError(path_, row, "missing premise or hypothesis"));
    }
    const std::optional<Label> parsed = labels_.Parse(*label);
    if (!parsed) {
      throw CorpusError(RowError(path_, row, "unknown label '" + *label + "'"));
    }
    if (!seen_ids_.insert(*id).second) {
      throw CorpusError(RowError(path_, row, "duplicate id '" + *id + "'"));
    }
    result_.dataset.records.push_back(
        Record{std::move(*id), std::move(*premise), std::move(*hypothesis), *parsed});
  }

 private:
  const std::filesystem::path& path_;
  const LabelSet& labels_;
  LoadResult& result_;
  std::unordered_set<std::string> seen_ids_;
};

void LoadJsonl(std::istream& in, const std::filesystem::path& path,
               Loader& loader) {
  std::string line;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    json object;
    try {
      object = json::parse(line);
    } catch (const json::parse_error& e) {
      throw CorpusError(RowError(path, row, std::string("malformed JSON: ") + e.what()));
    }
    if (!object.is_object()) {
      throw CorpusError(RowError(path, row, "expected a JSON object"));
    }
    loader.Add(row, JsonField(object, {"id", "pairID"}),
               JsonField(object, {"premise", "sentence1"}),
               JsonField(object, {"hypothesis", "sentence2"}),
               JsonField(object, {"label", "gold_label"}));
  }
}

void LoadTsv(std::istream& in, const std::filesystem::path& path,
             Loader& loader) {
  std::string line;
  if (!std::getline(in, line)) throw CorpusError(path.string() + ": missing header row");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const std::vector<std::string_view> header = SplitTabs(line);
  auto column = [&](std::initializer_list<std::string_view> names) -> std::optional<std::size_t> {
    for (std::string_view name : names) {
      auto it = std::find(header.begin(), header.end(), name);
      if (it != header.end()) return static_cast<std::size_t>(it - header.begin());
    }
    return std::nullopt;
  };
  const auto id_col = column({"id", "pairID"});
  const auto premise_col = column({"premise", "sentence1"});
  const auto hypothesis_col = column({"hypothesis", "sentence2"});
  const auto label_col = column({"label", "gold_label"});
  if (!id_col || !premise_col || !hypothesis_col || !label_col) {
    throw CorpusError(path.string() +
                      ": header must name id, premise, hypothesis and label columns");
  }
  const std::size_t needed =
      1 + std::max({*id_col, *premise_col, *hypothesis_col, *label_col});

  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::vector<std::string_view> fields = SplitTabs(line);
    if (fields.size() < needed) {
      throw CorpusError(RowError(path, row, "expected at least " + std::to_string(needed) +
                                                " columns, found " +
                                                std::to_string(fields.size())));
    }
    loader.Add(row, std::string(fields[*id_col]), std::string(fields[*premise_col]),
               std::string(fields[*hypothesis_col]), std::string(fields[*label_col]));
  }
}

}  // namespace

LabelSet LabelSet::Snli() { return LabelSet({"entailment", "neutral", "contradiction"}); }

LabelSet::LabelSet(std::vector<std::string> names) : names_(std::move(names)) {
  if (names_.size() < 2) throw std::invalid_argument("a label set needs at least two labels");
  std::vector<std::string> sorted = names_;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw std::invalid_argument("duplicate label name");
  }
}

std::optional<Label> LabelSet::Parse(std::string_view text) const {
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (names_[i] == text) return Label{i};
  }
  std::size_t code = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), code);
  if (ec == std::errc() && ptr == text.data() + text.size() && !text.empty() &&
      code < names_.size()) {
    return Label{code};
  }
  return std::nullopt;
}

std::string DuplicateId(std::string_view original_id, std::size_t k) {
  std::string id(original_id);
  id += kDupMarker;
  id += std::to_string(k);
  return id;
}

std::string_view OriginId(std::string_view id) {
  const std::size_t pos = id.rfind(kDupMarker);
  if (pos == std::string_view::npos) return id;
  const std::string_view suffix = id.substr(pos + kDupMarker.size());
  if (suffix.empty() ||
      !std::all_of(suffix.begin(), suffix.end(), [](char c) { return c >= '0' && c <= '9'; })) {
    return id;
  }
  return id.substr(0, pos);
}

FileFormat FormatFromPath(const std::filesystem::path& path) {
  const std::string ext = path.extension().string();
  return (ext == ".tsv" || ext == ".txt") ? FileFormat::kTsv : FileFormat::kJsonl;
}

LoadResult LoadDataset(const std::filesystem::path& path, FileFormat format,
                       const LabelSet& labels, std::string split_name) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CorpusError("cannot open " + path.string() + " for reading");
  LoadResult result;
  result.dataset.split_name = std::move(split_name);
  result.dataset.label_set = labels;
  Loader loader(path, labels, result);
  if (format == FileFormat::kJsonl) {
    LoadJsonl(in, path, loader);
  } else {
    LoadTsv(in, path, loader);
  }
  if (in.bad()) throw CorpusError("read error on " + path.string());
  return result;
}

void WriteDataset(const Dataset& dataset, const std::filesystem::path& path,
                  FileFormat format) {
  if (dataset.empty()) throw CorpusError("empty dataset");
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw CorpusError("cannot open " + path.string() + " for writing");
  if (format == FileFormat::kJsonl) {
    for (const Record& r : dataset.records) {
      json object = {{"id", r.id},
                     {"premise", r.premise},
                     {"hypothesis", r.hypothesis},
                     {"label", dataset.label_set.name(r.label)}};
      out << object.dump() << '\n';
    }
  } else {
    out << "id\tpremise\thypothesis\tlabel\n";
    for (const Record& r : dataset.records) {
      for (const std::string* field : {&r.id, &r.premise, &r.hypothesis}) {
        if (field->find_first_of("\t\n\r") != std::string::npos) {
          throw CorpusError("record '" + r.id + "' has a tab or newline, cannot write TSV");
        }
      }
      out << r.id << '\t' << r.premise << '\t' << r.hypothesis << '\t'
          << dataset.label_set.name(r.label) << '\n';
    }
  }
  out.flush();
  if (!out) throw CorpusError("write error on " + path.string());
}

}  // namespace artifact_audit
