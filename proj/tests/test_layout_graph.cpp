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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "layoutrank/errors.hpp"
#include "layoutrank/layout_graph.hpp"
#include "oracles.hpp"

using namespace layoutrank;

namespace {

dom::DomTree chain(std::size_t d) {
  dom::DomTree t;
  for (std::size_t i = 0; i < d; ++i) {
    dom::DomNode n;
    n.node_id = i;
    n.tag_name = "div";
    if (i + 1 < d) n.children = {i + 1};
    t.nodes.push_back(n);
  }
  return t;
}

std::set<graph::Edge> edge_set(const graph::LayoutGraph& g) { return {g.edges.begin(), g.edges.end()}; }

}  // namespace

TEST_CASE("hand traces") {
  SUBCASE("root with two children") {
    auto g = graph::build_layout_graph(dom::parse_html("<div><p>a</p><p>b</p></div>"));
    CHECK(g.num_nodes == 4);
    CHECK(g.edges.size() == 10);
    std::set<graph::Edge> want;
    for (auto [a, b] : std::vector<graph::Edge>{{0, 1}, {0, 2}, {0, 3}, {2, 1}, {3, 1}}) {
      want.insert({a, b});
      want.insert({b, a});
    }
    CHECK(edge_set(g) == want);
    CHECK(graph::graph_stats(g).num_edges == 10);
  }
  SUBCASE("single node") {
    auto g = graph::build_layout_graph(dom::parse_html("<div></div>"));
    CHECK(g.num_nodes == 2);
    CHECK(edge_set(g) == std::set<graph::Edge>{{0, 1}, {1, 0}});
    CHECK(graph::graph_stats(g).depth == 0);
    CHECK(g.node_types[0] == dom::NodeType::Virtual);
    CHECK(g.raw_features[0].empty());
  }
}

TEST_CASE("chains match edge enumeration") {
  for (std::size_t d = 1; d <= 10; ++d) {
    auto g = graph::build_layout_graph(chain(d));
    CHECK(g.num_nodes == d + 1);
    CHECK(g.edges.size() / 2 == d + (d - 1));
    CHECK(graph::graph_stats(g).depth == d - 1);
  }
}

TEST_CASE("random trees equal the recursive construction") {
  oracle::Rng rng(42);
  for (int i = 0; i < 300; ++i) {
    auto tree = oracle::random_tree(rng, 1 + oracle::pick(rng, 50));
    auto g = graph::build_layout_graph(tree);
    auto [nodes, edges] = oracle::alg1(tree);
    CHECK(g.num_nodes == nodes.size());
    CHECK(edge_set(g) == edges);
    CHECK(std::is_sorted(g.edges.begin(), g.edges.end()));
    std::size_t virtual_degree = 0;
    for (auto [s, t] : g.edges) virtual_degree += s == 0;
    CHECK(virtual_degree == g.num_nodes - 1);
    graph::validate(g);
  }
}

TEST_CASE("raw features") {
  auto t = dom::estimate_geometry(
      dom::parse_html("<body><div style='font-size:12px;border:2px solid;position:absolute;top:5px;left:7px;"
                      "width:100px;height:40px;font-weight:bold;text-align:center'>one two three</div></body>"),
      {1280, 2000});
  auto f = graph::extract_raw_features(t.nodes[1]);
  CHECK(std::get<double>(f.at("height")) == 40);
  CHECK(std::get<double>(f.at("width")) == 100);
  CHECK(std::get<double>(f.at("xpos")) == 7);
  CHECK(std::get<double>(f.at("ypos")) == 5);
  CHECK(std::get<double>(f.at("word_count")) == 3);
  CHECK(std::get<double>(f.at("font_size")) == 12);
  CHECK(std::get<double>(f.at("border")) == 2);
  CHECK(std::get<std::string>(f.at("position")) == "absolute");
  CHECK(std::get<std::string>(f.at("font_weight")) == "bold");
  CHECK(std::get<std::string>(f.at("text_align")) == "center");
  CHECK(std::get<std::string>(f.at("tag_name")) == "div");
  CHECK_FALSE(f.contains("outline_style"));
  for (const auto& def : graph::node_feature_defs()) {
    if (!f.contains(def.name)) continue;
    const bool is_number = std::holds_alternative<double>(f.at(def.name));
    CHECK(is_number == (def.kind == graph::FeatureKind::Continuous));
  }
}

TEST_CASE("jsonl round trip and validation") {
  oracle::Rng rng(8);
  std::vector<graph::LayoutGraph> gs;
  for (int i = 0; i < 5; ++i) gs.push_back(graph::build_layout_graph(oracle::random_tree(rng, 3 + i * 4)));
  for (const auto& g : gs) CHECK(graph::from_json_line(graph::to_json_line(g)) == g);
  auto bad = gs[0];
  bad.edges.pop_back();
  CHECK_THROWS_AS(graph::validate(bad), DataError);
  CHECK_THROWS_AS(graph::from_json_line("{}", 4), DataError);
}
