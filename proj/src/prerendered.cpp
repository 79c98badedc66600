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

#include <json.hpp>
#include <optional>
#include <sstream>

#include "layoutrank/dom.hpp"
#include "layoutrank/errors.hpp"
#include "layoutrank/style.hpp"
#include "layoutrank/util.hpp"

namespace layoutrank::dom {

using nlohmann::json;

std::string export_prerendered(const DomTree& tree) {
  std::ostringstream out;
  out << json{{"url", tree.source_url}, {"category", tree.category}}.dump() << '\n';
  auto parent = tree.parents();
  for (const auto& n : tree.nodes) {
    json rec;
    rec["node_id"] = n.node_id;
    rec["parent_id"] = n.node_id == tree.root_id ? json(nullptr) : json(parent[n.node_id]);
    rec["tag_name"] = n.tag_name;
    rec["style"] = n.style;
    rec["geometry"] = {{"height", n.geometry.height},
                       {"width", n.geometry.width},
                       {"xpos", n.geometry.xpos},
                       {"ypos", n.geometry.ypos}};
    rec["text_length"] = n.text_length;
    out << rec.dump() << '\n';
  }
  return out.str();
}

namespace {

const json& require(const json& obj, const char* field, std::size_t line) {
  auto it = obj.find(field);
  if (it == obj.end()) throw SchemaError(line, std::string("missing field '") + field + "'");
  return *it;
}

double require_number(const json& obj, const char* field, std::size_t line) {
  const auto& v = require(obj, field, line);
  if (!v.is_number()) throw SchemaError(line, std::string("field '") + field + "' is not a number");
  return v.get<double>();
}

struct PendingDoc {
  DomTree tree;
  std::vector<std::optional<NodeId>> parent;
  std::size_t header_line = 0;
};

DomTree finish(PendingDoc doc) {
  auto& tree = doc.tree;
  if (tree.nodes.empty()) throw SchemaError(doc.header_line, "document has no nodes");
  std::optional<NodeId> root;
  for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
    if (!doc.parent[i]) {
      if (root) throw SchemaError(doc.header_line + i + 1, "second root node");
      root = i;
      continue;
    }
    if (*doc.parent[i] >= tree.nodes.size() || *doc.parent[i] == i) {
      throw SchemaError(doc.header_line + i + 1, "parent_id out of range");
    }
    tree.nodes[*doc.parent[i]].children.push_back(i);
  }
  if (!root) throw SchemaError(doc.header_line, "no root node");
  tree.root_id = *root;
  validate(tree);
  return tree;
}

}  // namespace

std::vector<DomTree> parse_prerendered_all(std::string_view text) {
  std::vector<DomTree> docs;
  std::optional<PendingDoc> current;
  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    json rec;
    try {
      rec = json::parse(line);
    } catch (const json::exception& e) {
      throw SchemaError(line_no, std::string("invalid JSON: ") + e.what());
    }
    if (!rec.is_object()) throw SchemaError(line_no, "record is not an object");

    if (!rec.contains("node_id")) {
      if (current) docs.push_back(finish(std::move(*current)));
      current.emplace();
      current->header_line = line_no;
      const auto& url = require(rec, "url", line_no);
      const auto& cat = require(rec, "category", line_no);
      if (!url.is_string() || !cat.is_string()) throw SchemaError(line_no, "url/category must be strings");
      current->tree.source_url = url.get<std::string>();
      current->tree.category = cat.get<std::string>();
      continue;
    }
    if (!current) throw SchemaError(line_no, "node record before document header");

    DomNode node;
    const auto& id = require(rec, "node_id", line_no);
    if (!id.is_number_unsigned() && !(id.is_number_integer() && id.get<long long>() >= 0)) {
      throw SchemaError(line_no, "node_id must be a non-negative integer");
    }
    node.node_id = id.get<NodeId>();
    if (node.node_id != current->tree.nodes.size()) {
      throw SchemaError(line_no, "node ids must be contiguous and in order");
    }
    const auto& parent = require(rec, "parent_id", line_no);
    if (!parent.is_null() && !parent.is_number_integer()) {
      throw SchemaError(line_no, "parent_id must be an integer or null");
    }
    if (parent.is_number_integer() && parent.get<long long>() < 0) {
      throw SchemaError(line_no, "parent_id must be non-negative");
    }
    const auto& tag = require(rec, "tag_name", line_no);
    if (!tag.is_string()) throw SchemaError(line_no, "tag_name must be a string");
    node.tag_name = to_lower(tag.get<std::string>());
    node.node_type = style::node_type_for_tag(node.tag_name);
    const auto& style = require(rec, "style", line_no);
    if (!style.is_object()) throw SchemaError(line_no, "style must be an object");
    for (const auto& [k, v] : style.items()) {
      node.style[k] = v.is_string() ? v.get<std::string>() : v.dump();
    }
    const auto& geom = require(rec, "geometry", line_no);
    if (!geom.is_object()) throw SchemaError(line_no, "geometry must be an object");
    node.geometry.height = require_number(geom, "height", line_no);
    node.geometry.width = require_number(geom, "width", line_no);
    node.geometry.xpos = require_number(geom, "xpos", line_no);
    node.geometry.ypos = require_number(geom, "ypos", line_no);
    const auto& words = require(rec, "text_length", line_no);
    if (!words.is_number_integer() || words.get<long long>() < 0) {
      throw SchemaError(line_no, "text_length must be a non-negative integer");
    }
    node.text_length = words.get<std::size_t>();

    current->parent.push_back(parent.is_null() ? std::nullopt
                                               : std::optional<NodeId>(parent.get<NodeId>()));
    current->tree.nodes.push_back(std::move(node));
  }
  if (current) docs.push_back(finish(std::move(*current)));
  return docs;
}

DomTree parse_prerendered(std::string_view text) {
  auto docs = parse_prerendered_all(text);
  if (docs.empty()) throw EmptyDocument("no document header found");
  if (docs.size() > 1) throw DataError("expected one document, found " + std::to_string(docs.size()));
  return std::move(docs.front());
}

DomTree load_prerendered(const std::filesystem::path& path) {
  return parse_prerendered(read_file(path));
}

}  // namespace layoutrank::dom
