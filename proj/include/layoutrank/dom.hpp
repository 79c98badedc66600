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

#ifndef LAYOUTRANK_DOM_HPP
#define LAYOUTRANK_DOM_HPP

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace layoutrank::dom {

using NodeId = std::size_t;

enum class NodeType { Text, Image, Video, Container, Interactive, Other, Virtual };

std::string_view to_string(NodeType type);
NodeType node_type_from_string(std::string_view name);

// Page-coordinate box in CSS pixels.
struct Geometry {
  double height = 0.0;
  double width = 0.0;
  double xpos = 0.0;
  double ypos = 0.0;

  bool operator==(const Geometry&) const = default;
};

// Resolved style: per-tag defaults overlaid by the inline style attribute.
// Keys are lowercase CSS property names, values are raw strings.
using StyleMap = std::map<std::string, std::string>;

struct DomNode {
  NodeId node_id = 0;
  std::string tag_name;
  NodeType node_type = NodeType::Other;
  StyleMap style;
  Geometry geometry;
  std::size_t text_length = 0;  // words of text directly inside this element
  std::vector<NodeId> children;

  bool operator==(const DomNode&) const = default;
};

// Element hierarchy of one page. Node ids are the pre-order positions, so
// nodes[i].node_id == i and the root is node 0.
struct DomTree {
  std::vector<DomNode> nodes;
  NodeId root_id = 0;
  std::string source_url;
  std::string category;

  std::size_t size() const { return nodes.size(); }
  const DomNode& root() const { return nodes.at(root_id); }

  // Parent of every node; the root maps to itself.
  std::vector<NodeId> parents() const;
  // Longest root-to-leaf path length in edges.
  std::size_t depth() const;

  bool operator==(const DomTree&) const = default;
};

// Checks the structural invariants (contiguous ids, single root, acyclic,
// every node reachable, finite non-negative geometry). Throws DataError.
void validate(const DomTree& tree);

struct Viewport {
  double width = 1280.0;
  double height = 2000.0;
};

// Error-recovering parse of an HTML subset. Throws EmptyDocument when no
// element can be recovered.
DomTree parse_html(std::string_view source, std::string url = {}, std::string category = {});

// Deterministic flow-layout estimate of every node's box. Returns a copy
// with geometry filled in.
DomTree estimate_geometry(const DomTree& tree, const Viewport& viewport);

// Pre-rendered JSONL node-record format. One header line
// {"url":..,"category":..} followed by one line per node.
std::string export_prerendered(const DomTree& tree);
DomTree load_prerendered(const std::filesystem::path& path);
DomTree parse_prerendered(std::string_view text);
// Several documents back to back, each starting with its header line.
std::vector<DomTree> parse_prerendered_all(std::string_view text);

}  // namespace layoutrank::dom

#endif  // LAYOUTRANK_DOM_HPP
