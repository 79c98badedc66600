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

#ifndef LAYOUTRANK_FEATURIZER_HPP
#define LAYOUTRANK_FEATURIZER_HPP

#include <cstddef>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "layoutrank/layout_graph.hpp"
#include "layoutrank/tensor.hpp"

namespace layoutrank::features {

// Non-uniform bucketing of one continuous feature. Bucket i holds values in
// [boundaries[i-1], boundaries[i]); index num_buckets() is MISSING.
struct BucketSpec {
  std::string feature_name;
  std::vector<double> boundaries;
  std::vector<std::size_t> occupancy;  // training count per bucket

  std::size_t num_buckets() const { return boundaries.size() + 1; }
  std::size_t bucket(double value) const;
  std::size_t missing_index() const { return num_buckets(); }
  std::size_t table_size() const { return num_buckets() + 1; }
};

// Vocabulary of one discrete feature. Index 0 is OOV, tokens follow from 1,
// and tokens.size() + 1 is MISSING.
struct FeatureVocab {
  static constexpr std::size_t kOov = 0;

  std::string feature_name;
  std::vector<std::string> tokens;
  std::vector<std::size_t> occupancy;  // training count per token

  std::size_t lookup(const std::string& token) const;
  std::size_t missing_index() const { return tokens.size() + 1; }
  std::size_t table_size() const { return tokens.size() + 2; }
};

struct FeatureEntry {
  std::string name;
  graph::FeatureKind kind;
  std::variant<BucketSpec, FeatureVocab> spec;

  std::size_t table_size() const;
};

struct FeatureSchema {
  static constexpr int kVersion = 1;

  std::vector<FeatureEntry> features;
  FeatureVocab category_vocab;
  std::size_t embedding_dim = 64;
  std::size_t min_count = 50;

  std::string to_json() const;
  static FeatureSchema from_json(std::string_view text);
  // Fingerprint of the serialized schema.
  std::string hash() const;

  void save(const std::filesystem::path& path) const;
  static FeatureSchema load(const std::filesystem::path& path);
};

struct FitOptions {
  std::size_t min_count = 50;
  std::size_t num_quantiles = 16;
  std::size_t embedding_dim = 64;
};

// Quantile cut points, extended over ties and merged so every bucket holds
// at least min_count values. Degenerate inputs get a single cut at the
// smallest value.
BucketSpec fit_bucket_boundaries(std::string name, std::vector<double> values,
                                 std::size_t min_count, std::size_t num_quantiles);

// Throws EmptyCorpus on an empty corpus.
FeatureSchema fit_buckets(std::span<const graph::LayoutGraph> corpus, const FitOptions& options);

// One index per schema feature, into that feature's embedding table.
std::vector<std::size_t> encode_node(const graph::RawFeatureMap& raw, dom::NodeType node_type,
                                     const FeatureSchema& schema);

std::size_t encode_category(const std::string& category, const FeatureSchema& schema);

// A graph ready for the model: per DOM node index vectors (row i is graph
// node i + 1), the symmetric edge list, and the category index.
struct EncodedGraph {
  std::size_t num_nodes = 0;  // including the virtual node
  std::vector<graph::Edge> edges;
  std::vector<std::vector<std::size_t>> node_indices;
  std::size_t category = 0;
  std::string url;
};

EncodedGraph encode_graph(const graph::LayoutGraph& g, const FeatureSchema& schema);

// h_n^(0): the sum of the looked-up embedding rows, one table per feature.
std::vector<double> init_node_embedding(std::span<const std::size_t> indices,
                                        std::span<const tensor::Tensor> tables);

}  // namespace layoutrank::features

#endif  // LAYOUTRANK_FEATURIZER_HPP
