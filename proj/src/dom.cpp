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

#include <cmath>
#include <utility>

#include "layoutrank/dom.hpp"
#include "layoutrank/errors.hpp"

namespace layoutrank::dom {

std::string_view to_string(NodeType type) {
  switch (type) {
    case NodeType::Text: return "text";
    case NodeType::Image: return "image";
    case NodeType::Video: return "video";
    case NodeType::Container: return "container";
    case NodeType::Interactive: return "interactive";
    case NodeType::Other: return "other";
    case NodeType::Virtual: return "virtual";
  }
  return "other";
}

NodeType node_type_from_string(std::string_view name) {
  for (auto t : {NodeType::Text, NodeType::Image, NodeType::Video, NodeType::Container,
                 NodeType::Interactive, NodeType::Other, NodeType::Virtual}) {
    if (to_string(t) == name) return t;
  }
  throw DataError("unknown node type '" + std::string(name) + "'");
}

std::vector<NodeId> DomTree::parents() const {
  std::vector<NodeId> parent(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) parent[i] = i;
  for (const auto& n : nodes) {
    for (auto c : n.children) parent.at(c) = n.node_id;
  }
  return parent;
}

std::size_t DomTree::depth() const {
  if (nodes.empty()) return 0;
  std::size_t best = 0;
  std::vector<std::pair<NodeId, std::size_t>> stack{{root_id, 0}};
  while (!stack.empty()) {
    auto [id, d] = stack.back();
    stack.pop_back();
    best = std::max(best, d);
    for (auto c : nodes[id].children) stack.emplace_back(c, d + 1);
  }
  return best;
}

void validate(const DomTree& tree) {
  const auto n = tree.nodes.size();
  if (n == 0) throw EmptyDocument("tree has no nodes");
  if (tree.root_id >= n) throw DataError("root id out of range");
  std::vector<int> parent_count(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& node = tree.nodes[i];
    if (node.node_id != i) throw DataError("node ids are not contiguous at " + std::to_string(i));
    const auto& g = node.geometry;
    for (double v : {g.height, g.width, g.xpos, g.ypos}) {
      if (!std::isfinite(v) || v < 0) throw DataError("bad geometry on node " + std::to_string(i));
    }
    for (auto c : node.children) {
      if (c >= n) throw DataError("child id out of range on node " + std::to_string(i));
      ++parent_count[c];
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    int expected = i == tree.root_id ? 0 : 1;
    if (parent_count[i] != expected) {
      throw DataError("node " + std::to_string(i) + " has " + std::to_string(parent_count[i]) +
                      " parents");
    }
  }
  // With in-degree one everywhere but the root, reaching every node from
  // the root rules out cycles.
  std::vector<bool> seen(n, false);
  std::vector<NodeId> stack{tree.root_id};
  std::size_t reached = 0;
  while (!stack.empty()) {
    auto id = stack.back();
    stack.pop_back();
    if (seen[id]) throw DataError("cycle through node " + std::to_string(id));
    seen[id] = true;
    ++reached;
    for (auto c : tree.nodes[id].children) stack.push_back(c);
  }
  if (reached != n) throw DataError("tree is not connected");
}

}  // namespace layoutrank::dom
