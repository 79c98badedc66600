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

#include "layoutrank/layout_graph.hpp"

#include <algorithm>
#include <json.hpp>
#include <set>
#include <sstream>

#include "layoutrank/errors.hpp"
#include "layoutrank/style.hpp"
#include "layoutrank/util.hpp"

namespace layoutrank::graph {

using nlohmann::json;

const std::vector<FeatureDef>& node_feature_defs() {
  static const std::vector<FeatureDef> defs = {
      // location
      {"height", FeatureKind::Continuous},
      {"width", FeatureKind::Continuous},
      {"xpos", FeatureKind::Continuous},
      {"ypos", FeatureKind::Continuous},
      {"position", FeatureKind::Discrete},
      // content
      {"word_count", FeatureKind::Continuous},
      {"font_size", FeatureKind::Continuous},
      {"font_style", FeatureKind::Discrete},
      {"line_height", FeatureKind::Continuous},
      {"font_weight", FeatureKind::Discrete},
      {"text_align", FeatureKind::Discrete},
      // layout
      {"border", FeatureKind::Continuous},
      {"padding", FeatureKind::Continuous},
      {"margin", FeatureKind::Continuous},
      {"visibility", FeatureKind::Discrete},
      {"display", FeatureKind::Discrete},
      {"outline_style", FeatureKind::Discrete},
      {"outline_width", FeatureKind::Continuous},
      // others
      {"tag_name", FeatureKind::Discrete},
      {"node_type", FeatureKind::Discrete},
  };
  return defs;
}

namespace {

bool is_outline_style(std::string_view token) {
  static const std::set<std::string_view> styles = {"none",   "hidden", "dotted", "dashed",
                                                     "solid",  "double", "groove", "ridge",
                                                     "inset",  "outset", "auto"};
  return styles.count(token) > 0;
}

}  // namespace

RawFeatureMap extract_raw_features(const dom::DomNode& node) {
  RawFeatureMap f;
  f["height"] = node.geometry.height;
  f["width"] = node.geometry.width;
  f["xpos"] = node.geometry.xpos;
  f["ypos"] = node.geometry.ypos;
  f["word_count"] = static_cast<double>(node.text_length);
  f["tag_name"] = node.tag_name;
  f["node_type"] = std::string(dom::to_string(node.node_type));

  const auto& s = node.style;
  auto token = [&](const char* property, const char* feature) {
    if (auto v = style::lookup(s, property); v && !v->empty()) f[feature] = *v;
  };
  token("position", "position");
  token("font-style", "font_style");
  token("font-weight", "font_weight");
  token("text-align", "text_align");
  token("visibility", "visibility");
  token("display", "display");

  double font_size = style::kDefaultFontSize;
  if (auto v = style::lookup(s, "font-size")) {
    if (auto px = style::parse_length(*v, style::kDefaultFontSize)) {
      font_size = *px;
      f["font_size"] = *px;
    }
  }
  if (auto v = style::lookup(s, "line-height"); v && *v != "normal") {
    auto props = style::box_props(node.tag_name, s, 0.0);
    f["line_height"] = props.line_height;
  }
  auto length = [&](std::initializer_list<const char*> properties, const char* feature) {
    for (const char* p : properties) {
      if (auto v = style::lookup(s, p)) {
        if (auto px = style::first_length(*v, font_size)) {
          f[feature] = *px;
          return;
        }
      }
    }
  };
  length({"border-width", "border"}, "border");
  length({"padding"}, "padding");
  length({"margin"}, "margin");
  length({"outline-width", "outline"}, "outline_width");

  if (auto v = style::lookup(s, "outline-style")) {
    f["outline_style"] = *v;
  } else if (auto o = style::lookup(s, "outline")) {
    for (const auto& t : split(*o, ' ')) {
      if (is_outline_style(t)) {
        f["outline_style"] = t;
        break;
      }
    }
  }
  return f;
}

LayoutGraph build_layout_graph(const dom::DomTree& tree) {
  if (tree.nodes.empty()) throw EmptyDocument("cannot build a graph from an empty tree");
  LayoutGraph g;
  g.url = tree.source_url;
  g.category = tree.category;

  // Pre-order DFS assigns graph indices 1..n; the virtual node is 0.
  std::vector<std::size_t> index_of(tree.nodes.size(), 0);
  std::vector<dom::NodeId> order;
  order.reserve(tree.nodes.size());
  std::vector<dom::NodeId> stack{tree.root_id};
  while (!stack.empty()) {
    auto id = stack.back();
    stack.pop_back();
    index_of[id] = order.size() + 1;
    order.push_back(id);
    const auto& children = tree.nodes[id].children;
    for (auto it = children.rbegin(); it != children.rend(); ++it) stack.push_back(*it);
  }

  g.num_nodes = order.size() + 1;
  g.node_types.reserve(g.num_nodes);
  g.raw_features.reserve(g.num_nodes);
  g.node_types.push_back(dom::NodeType::Virtual);
  g.raw_features.emplace_back();
  for (auto id : order) {
    g.node_types.push_back(tree.nodes[id].node_type);
    g.raw_features.push_back(extract_raw_features(tree.nodes[id]));
  }

  // Recursive construction unrolled over the same pre-order: every visited
  // node contributes (virtual, node), and each of its children contributes
  // (virtual, child) and (child, node). Repeats collapse in the set.
  std::set<Edge> directed;
  for (auto id : order) {
    const auto self = index_of[id];
    directed.emplace(kVirtualNode, self);
    for (auto c : tree.nodes[id].children) {
      directed.emplace(kVirtualNode, index_of[c]);
      directed.emplace(index_of[c], self);
    }
  }
  std::set<Edge> symmetric;
  for (const auto& [s, d] : directed) {
    symmetric.emplace(s, d);
    symmetric.emplace(d, s);
  }
  g.edges.assign(symmetric.begin(), symmetric.end());
  return g;
}

GraphStats graph_stats(const LayoutGraph& g) {
  GraphStats st;
  st.num_nodes = g.num_nodes;
  st.num_edges = g.edges.size();
  for (auto t : g.node_types) ++st.type_histogram[std::string(dom::to_string(t))];
  if (g.num_nodes < 2) return st;

  // Depth of the DOM tree: BFS from the DOM root (index 1) over the
  // non-virtual edges.
  std::vector<std::vector<std::size_t>> adj(g.num_nodes);
  for (const auto& [s, d] : g.edges) {
    if (s != kVirtualNode && d != kVirtualNode) adj[s].push_back(d);
  }
  std::vector<long> dist(g.num_nodes, -1);
  std::vector<std::size_t> queue{1};
  dist[1] = 0;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    auto u = queue[head];
    for (auto v : adj[u]) {
      if (dist[v] < 0) {
        dist[v] = dist[u] + 1;
        queue.push_back(v);
      }
    }
  }
  st.depth = static_cast<std::size_t>(*std::max_element(dist.begin(), dist.end()));
  return st;
}

void validate(const LayoutGraph& g) {
  if (g.num_nodes < 2) throw DataError("layout graph needs the virtual node and a root");
  if (g.node_types.size() != g.num_nodes || g.raw_features.size() != g.num_nodes) {
    throw DataError("per-node vectors disagree with num_nodes");
  }
  if (g.node_types[kVirtualNode] != dom::NodeType::Virtual) {
    throw DataError("node 0 must be the virtual node");
  }
  std::set<Edge> seen;
  for (const auto& e : g.edges) {
    if (e.first >= g.num_nodes || e.second >= g.num_nodes || e.first == e.second) {
      throw DataError("edge out of range or self loop");
    }
    if (!seen.insert(e).second) throw DataError("duplicate edge");
  }
  for (const auto& [s, d] : seen) {
    if (!seen.count({d, s})) throw DataError("edge list is not symmetric");
  }
  for (std::size_t n = 1; n < g.num_nodes; ++n) {
    if (!seen.count({kVirtualNode, n})) throw DataError("virtual node misses node " + std::to_string(n));
  }
}

std::string to_json_line(const LayoutGraph& g) {
  json j;
  j["url"] = g.url;
  j["category"] = g.category;
  j["num_nodes"] = g.num_nodes;
  json edges = json::array();
  for (const auto& [s, d] : g.edges) edges.push_back({s, d});
  j["edges"] = std::move(edges);
  json types = json::array();
  for (auto t : g.node_types) types.push_back(dom::to_string(t));
  j["node_types"] = std::move(types);
  json feats = json::array();
  for (const auto& m : g.raw_features) {
    json o = json::object();
    for (const auto& [k, v] : m) {
      if (std::holds_alternative<double>(v)) {
        o[k] = std::get<double>(v);
      } else {
        o[k] = std::get<std::string>(v);
      }
    }
    feats.push_back(std::move(o));
  }
  j["raw_features"] = std::move(feats);
  return j.dump();
}

LayoutGraph from_json_line(std::string_view line, std::size_t line_no) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::exception& e) {
    throw SchemaError(line_no, std::string("invalid JSON: ") + e.what());
  }
  LayoutGraph g;
  try {
    g.url = j.at("url").get<std::string>();
    g.category = j.at("category").get<std::string>();
    g.num_nodes = j.at("num_nodes").get<std::size_t>();
    for (const auto& e : j.at("edges")) g.edges.emplace_back(e.at(0).get<std::size_t>(), e.at(1).get<std::size_t>());
    for (const auto& t : j.at("node_types")) g.node_types.push_back(dom::node_type_from_string(t.get<std::string>()));
    for (const auto& o : j.at("raw_features")) {
      RawFeatureMap m;
      for (const auto& [k, v] : o.items()) {
        if (v.is_number()) {
          m[k] = v.get<double>();
        } else if (v.is_string()) {
          m[k] = v.get<std::string>();
        }
      }
      g.raw_features.push_back(std::move(m));
    }
  } catch (const json::exception& e) {
    throw SchemaError(line_no, e.what());
  }
  try {
    validate(g);
  } catch (const DataError& e) {
    throw SchemaError(line_no, e.what());
  }
  return g;
}

std::vector<LayoutGraph> read_graphs(const std::filesystem::path& path) {
  std::istringstream in(read_file(path));
  std::vector<LayoutGraph> graphs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    graphs.push_back(from_json_line(line, line_no));
  }
  return graphs;
}

void write_graphs(const std::filesystem::path& path, const std::vector<LayoutGraph>& graphs) {
  std::string out;
  for (const auto& g : graphs) {
    out += to_json_line(g);
    out += '\n';
  }
  write_file(path, out);
}

}  // namespace layoutrank::graph
