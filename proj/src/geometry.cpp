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

// Flow-layout heuristic.
//
//  * Block boxes take the full width of their containing block and stack
//    vertically. Inline boxes take their intrinsic width (explicit width,
//    replaced-element default, or text plus inline children) and share
//    line rows, wrapping when the row is full.
//  * A node's own text sits above its children: ceil(words * word_width /
//    width) lines of line-height each.
//  * Explicit width is clamped to the containing block for in-flow boxes;
//    explicit height always wins, and in-flow descendants are clipped to
//    it so every in-flow child stays inside its parent.
//  * position:absolute|fixed boxes are placed at parent origin + top/left
//    and do not advance the flow.
//  * display:none subtrees collapse to zero boxes at the flow cursor.
//  * Every coordinate is rounded to whole pixels when it is assigned.

#include <algorithm>
#include <cmath>

#include "layoutrank/dom.hpp"
#include "layoutrank/errors.hpp"
#include "layoutrank/style.hpp"

namespace layoutrank::dom {

namespace {

using style::BoxProps;
using style::DisplayKind;

class FlowLayout {
 public:
  explicit FlowLayout(DomTree& tree) : tree_(tree), out_of_flow_(tree.size(), false) {}

  void run(const Viewport& viewport) {
    auto& root = tree_.nodes[tree_.root_id];
    auto props = style::box_props(root.tag_name, root.style, viewport.width);
    place(tree_.root_id, 0.0, 0.0, viewport.width, false);
    if (props.display != DisplayKind::None && !props.height) {
      root.geometry.height = std::max(root.geometry.height, std::round(viewport.height));
    }
    clip(tree_.root_id);
  }

 private:
  double word_width(const BoxProps& p) const { return style::kWordWidthEm * p.font_size; }

  double intrinsic_width(NodeId id, double avail) const {
    const auto& node = tree_.nodes[id];
    auto p = style::box_props(node.tag_name, node.style, avail);
    if (p.display == DisplayKind::None) return 0.0;
    if (p.width) return std::round(std::min(*p.width, avail));
    if (p.replaced_width) return std::round(std::min(*p.replaced_width, avail));
    double content = static_cast<double>(node.text_length) * word_width(p);
    for (auto c : node.children) {
      const auto& child = tree_.nodes[c];
      auto cp = style::box_props(child.tag_name, child.style, avail);
      if (cp.out_of_flow) continue;
      content += intrinsic_width(c, avail);
    }
    return std::round(std::min(content, avail));
  }

  void collapse(NodeId id, double x, double y) {
    auto& node = tree_.nodes[id];
    node.geometry = Geometry{0.0, 0.0, x, y};
    for (auto c : node.children) collapse(c, x, y);
  }

  double place(NodeId id, double x, double y, double avail, bool absolute) {
    auto& node = tree_.nodes[id];
    auto p = style::box_props(node.tag_name, node.style, avail);
    if (p.display == DisplayKind::None) {
      collapse(id, x, y);
      return 0.0;
    }

    double w;
    if (absolute) {
      if (p.width) {
        w = *p.width;
      } else if (p.display == DisplayKind::Block) {
        w = avail;
      } else {
        w = intrinsic_width(id, avail);
      }
    } else if (p.width) {
      w = std::min(*p.width, avail);
    } else if (p.display == DisplayKind::Block) {
      w = avail;
    } else {
      w = intrinsic_width(id, avail);
    }
    w = std::round(std::max(w, 0.0));

    double text_h = 0.0;
    if (node.text_length > 0 && w > 0) {
      double lines = std::ceil(static_cast<double>(node.text_length) * word_width(p) / w);
      text_h = std::round(lines * p.line_height);
    }

    double cursor = y + text_h;
    double line_x = 0.0;
    double line_h = 0.0;
    for (auto c : node.children) {
      const auto& child = tree_.nodes[c];
      auto cp = style::box_props(child.tag_name, child.style, w);
      if (cp.display == DisplayKind::None) {
        collapse(c, x, cursor);
      } else if (cp.out_of_flow) {
        out_of_flow_[c] = true;
        double cx = std::max(0.0, std::round(x + cp.left));
        double cy = std::max(0.0, std::round(y + cp.top));
        place(c, cx, cy, w, true);
      } else if (cp.display == DisplayKind::Block) {
        if (line_x > 0) {
          cursor += line_h;
          line_x = line_h = 0.0;
        }
        cursor += place(c, x, cursor, w, false);
      } else {
        double cw = intrinsic_width(c, w);
        if (line_x > 0 && line_x + cw > w) {
          cursor += line_h;
          line_x = line_h = 0.0;
        }
        double ch = place(c, x + line_x, cursor, w - line_x, false);
        line_x += tree_.nodes[c].geometry.width;
        line_h = std::max(line_h, ch);
      }
    }
    cursor += line_h;

    double h;
    if (p.height) {
      h = *p.height;
    } else if (p.replaced_height) {
      h = *p.replaced_height;
    } else {
      h = cursor - y;
    }
    h = std::round(std::max(h, 0.0));
    node.geometry = Geometry{h, w, x, y};
    return h;
  }

  void clip(NodeId id) {
    const auto box = tree_.nodes[id].geometry;
    const double bottom = box.ypos + box.height;
    for (auto c : tree_.nodes[id].children) {
      if (!out_of_flow_[c]) {
        auto& g = tree_.nodes[c].geometry;
        g.ypos = std::min(g.ypos, bottom);
        g.height = std::min(g.height, bottom - g.ypos);
      }
      clip(c);
    }
  }

  DomTree& tree_;
  std::vector<bool> out_of_flow_;
};

}  // namespace

DomTree estimate_geometry(const DomTree& tree, const Viewport& viewport) {
  if (!(viewport.width > 0) || !std::isfinite(viewport.width)) {
    throw DataError("viewport width must be positive");
  }
  DomTree out = tree;
  if (out.nodes.empty()) return out;
  FlowLayout(out).run(viewport);
  return out;
}

}  // namespace layoutrank::dom
