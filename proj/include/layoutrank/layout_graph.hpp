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

#ifndef LAYOUTRANK_LAYOUT_GRAPH_HPP
#define LAYOUTRANK_LAYOUT_GRAPH_HPP

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "layoutrank/dom.hpp"

namespace layoutrank::graph {

using RawValue = std::variant<double, std::string>;
using RawFeatureMap = std::map<std::string, RawValue>;

enum class FeatureKind { Continuous, Discrete };

struct FeatureDef {
  std::string name;
  FeatureKind kind;
};

// Per-node layout features: location, content, layout and tag rows, plus
// the node type. Page category is a graph-level input, not listed here.
const std::vector<FeatureDef>& node_feature_defs();

// Table of per-node raw values read from a DOM node's geometry, word count
// and resolved style. Properties the style does not set are absent.
RawFeatureMap extract_raw_features(const dom::DomNode& node);

inline constexpr std::size_t kVirtualNode = 0;

using Edge = std::pair<std::size_t, std::size_t>;  // (src, dst)

// Layout graph of one page. Node 0 is the virtual node, DOM nodes follow
// in depth-first pre-order. Edges are stored in both directions, sorted.
struct LayoutGraph {
  std::size_t num_nodes = 0;
  std::vector<Edge> edges;
  std::vector<dom::NodeType> node_types;
  std::vector<RawFeatureMap> raw_features;  // entry 0 (virtual) is empty
  std::string category;
  std::string url;

  bool operator==(const LayoutGraph&) const = default;
};

LayoutGraph build_layout_graph(const dom::DomTree& tree);

struct GraphStats {
  std::size_t num_nodes = 0;
  std::size_t num_edges = 0;  // directed, after symmetrization
  std::size_t depth = 0;      // of the originating DOM tree
  std::map<std::string, std::size_t> type_histogram;
};

GraphStats graph_stats(const LayoutGraph& g);

// Checks node 0 is the virtual hub, edges are symmetric and unique, and
// per-node vectors agree with num_nodes. Throws DataError.
void validate(const LayoutGraph& g);

// Graph JSONL interchange, one graph per line.
std::string to_json_line(const LayoutGraph& g);
LayoutGraph from_json_line(std::string_view line, std::size_t line_no = 1);
std::vector<LayoutGraph> read_graphs(const std::filesystem::path& path);
void write_graphs(const std::filesystem::path& path, const std::vector<LayoutGraph>& graphs);

}  // namespace layoutrank::graph

#endif  // LAYOUTRANK_LAYOUT_GRAPH_HPP
