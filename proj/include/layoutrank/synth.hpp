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

// Synthetic labeled webpages. Each document comes with a manifest holding
// the generator's own structure, flow-layout geometry and raw features, so
// the ingest path can be checked against it.

#ifndef LAYOUTRANK_SYNTH_HPP
#define LAYOUTRANK_SYNTH_HPP

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "layoutrank/dom.hpp"
#include "layoutrank/layout_graph.hpp"

namespace layoutrank::synth {

enum class Profile { Rich, Thin, Chaotic };

std::string_view to_string(Profile profile);
Profile profile_from_string(std::string_view name);  // throws BadSpec

// rich -> 1, thin and chaotic -> 0.
int label_for(Profile profile);

struct ProfileMix {
  double rich = 0.3;
  double thin = 0.4;
  double chaotic = 0.3;

  // "rich:0.3,thin:0.4,chaotic:0.3". Throws BadSpec.
  static ProfileMix parse(std::string_view text);
};

struct SynthSpec {
  std::size_t n = 2000;
  std::size_t categories = 5;
  ProfileMix mix;
  std::vector<double> category_weights;  // empty: equal shares
  std::uint64_t seed = 7;
  dom::Viewport viewport;
};

// Splits total into parts proportional to weights; the counts sum to total
// and each differs from its exact share by less than one.
std::vector<std::size_t> largest_remainder(std::size_t total, const std::vector<double>& weights);

struct ManifestNode {
  dom::NodeId node_id = 0;
  std::optional<dom::NodeId> parent_id;
  std::string tag_name;
  dom::NodeType node_type = dom::NodeType::Other;
  dom::StyleMap style;
  dom::Geometry geometry;
  std::size_t text_length = 0;
  graph::RawFeatureMap raw_features;
};

struct Document {
  std::string url;
  std::string category;
  Profile profile = Profile::Rich;
  int label = 1;
  std::string html;
  std::vector<ManifestNode> nodes;  // pre-order

  std::string manifest_json() const;
  // The generator's own tree, for the pre-rendered export.
  dom::DomTree tree() const;
};

Document generate_document(Profile profile, std::string category, std::string url, std::uint64_t seed,
                           const dom::Viewport& viewport = {});

// Throws BadSpec on n == 0, categories == 0, or a bad mix.
std::vector<Document> generate(const SynthSpec& spec);

struct SplitRatios {
  double train = 0.8;
  double eval = 0.1;
  double test = 0.1;
};

struct Split {
  std::vector<std::size_t> train;
  std::vector<std::size_t> eval;
  std::vector<std::size_t> test;
};

// Stratified by (category, label); lists of document positions, each sorted.
// Throws BadRatios unless the ratios are non-negative and sum to 1.
Split split(const std::vector<Document>& docs, const SplitRatios& ratios, std::uint64_t seed);

struct CorpusLayout {
  bool emit_prerendered = false;
  std::size_t num_queries = 20;  // synthetic ranked lists for rerank-sim
  std::size_t results_per_query = 8;
  SplitRatios ratios;
};

// Writes html/, optional prerendered/, index.tsv, labels.tsv, splits.tsv,
// manifest.jsonl and lists.jsonl under out.
void write_corpus(const std::filesystem::path& out, const std::vector<Document>& docs,
                  const CorpusLayout& layout, std::uint64_t seed);

}  // namespace layoutrank::synth

#endif  // LAYOUTRANK_SYNTH_HPP
