// Copyright (c) 2026 The LayoutRank Authors. All Rights Reserved.
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

// Offline score store, rerank simulation and report rendering.

#ifndef LAYOUTRANK_PIPELINE_HPP
#define LAYOUTRANK_PIPELINE_HPP

#include <cstddef>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "layoutrank/dom.hpp"
#include "layoutrank/layout_graph.hpp"
#include "layoutrank/trainer.hpp"

namespace layoutrank::pipeline {

struct ScoreEntry {
  std::string url;
  double score = 0.0;
  std::string model_version;

  bool operator==(const ScoreEntry&) const = default;
};

// Sorted url -> score map. The header pins the schema and model hashes.
class ScoreStore {
 public:
  ScoreStore() = default;
  // Sorts by url; throws DataError on a duplicate url or a score outside [0,1].
  ScoreStore(std::string schema_hash, std::string model_version, std::vector<ScoreEntry> entries);

  const std::string& schema_hash() const { return schema_hash_; }
  const std::string& model_version() const { return model_version_; }
  const std::vector<ScoreEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }

  // Binary search.
  std::optional<double> lookup(std::string_view url) const;

  std::string serialize() const;
  static ScoreStore parse(std::string_view text);
  void save(const std::filesystem::path& path) const;
  static ScoreStore load(const std::filesystem::path& path);

 private:
  std::string schema_hash_;
  std::string model_version_;
  std::vector<ScoreEntry> entries_;
};

struct RankedResult {
  std::string url;
  double relevance = 0.0;
  int rel_grade = 0;

  bool operator==(const RankedResult&) const = default;
};

struct RankedList {
  std::string query;
  std::vector<RankedResult> results;

  bool operator==(const RankedList&) const = default;
};

std::vector<RankedList> parse_lists(std::string_view jsonl);
std::string lists_to_jsonl(const std::vector<RankedList>& lists);

struct PositionChange {
  std::string query;
  std::string url;
  std::size_t before = 0;  // 1-based
  std::size_t after = 0;
  double quality = 0.0;
};

struct RerankReport {
  double weight = 0.0;
  std::vector<std::string> queries;
  std::vector<double> dcg_before;  // DCG at min(4, list length)
  std::vector<double> dcg_after;
  double mean_before = 0.0;
  double mean_after = 0.0;
  std::vector<PositionChange> changes;
  std::vector<std::string> warnings;

  double mean_delta() const { return mean_after - mean_before; }
  std::string to_json() const;
};

struct RerankOutput {
  std::vector<RankedList> lists;
  RerankReport report;
};

using QualityLookup = std::function<std::optional<double>(std::string_view)>;

// Orders each list by (1 - w) * relevance + w * quality, stable. Missing urls
// score 0.5 with a warning. w = 0 keeps every list as given. Throws BadWeight
// unless 0 <= w <= 1.
RerankOutput rerank_sim(const std::vector<RankedList>& lists, const QualityLookup& quality, double weight);

struct DeltaRow {
  std::string metric;
  double current = 0.0;
  double baseline = 0.0;
  double delta = 0.0;
  bool percent_points = false;  // delta shown as percentage points
};

// Compares two evaluation report JSON documents. Throws MetricMismatch when
// their metric sets differ.
std::vector<DeltaRow> compare_reports(std::string_view current_json, std::string_view baseline_json);
std::string render_deltas(const std::vector<DeltaRow>& rows);
std::string deltas_to_json(const std::vector<DeltaRow>& rows);

// One row per (family, K).
std::string render_ablation(const train::AblationTable& table);

// ---- corpus files

struct IndexEntry {
  std::string url;
  std::string category;
  std::filesystem::path html;         // empty when absent
  std::filesystem::path prerendered;  // empty when absent
};

// index.tsv: url, category, html path, pre-rendered path ("-" when absent),
// paths relative to the index file. Lines starting with '#' are comments.
std::vector<IndexEntry> read_index(const std::filesystem::path& path);
// url -> 0/1 label.
std::map<std::string, int> read_labels(const std::filesystem::path& path);
// url -> split name.
std::map<std::string, std::string> read_splits(const std::filesystem::path& path);

enum class IngestSource { Html, Prerendered };

// Parses one document into its layout graph.
graph::LayoutGraph ingest_html(std::string_view html, const std::string& url, const std::string& category,
                               const dom::Viewport& viewport);

// Every document of an index, in index order, across threads.
std::vector<graph::LayoutGraph> ingest_index(const std::vector<IndexEntry>& index, IngestSource source,
                                             const dom::Viewport& viewport, std::size_t threads = 0);

// Labeled, encoded examples for the graphs whose url has a label and, when
// split_name is non-empty, sits in that split.
std::vector<train::LabeledExample> make_examples(const std::vector<graph::LayoutGraph>& graphs,
                                                 const features::FeatureSchema& schema,
                                                 const std::map<std::string, int>& labels,
                                                 const std::map<std::string, std::string>& splits = {},
                                                 const std::string& split_name = "");

// Eval-mode scores for every graph. Throws SchemaMismatch when the checkpoint
// was trained on another schema.
ScoreStore score_batch(const std::vector<graph::LayoutGraph>& graphs, const features::FeatureSchema& schema,
                       const Checkpoint& checkpoint, std::size_t threads = 0);

}  // namespace layoutrank::pipeline

#endif  // LAYOUTRANK_PIPELINE_HPP
