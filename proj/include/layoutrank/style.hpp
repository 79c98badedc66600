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

// Fixed style tables shipped with the library: the tag -> node type map,
// the per-tag default sheet, and CSS value helpers shared by the layout
// heuristic and the feature extractor.

#ifndef LAYOUTRANK_STYLE_HPP
#define LAYOUTRANK_STYLE_HPP

#include <optional>
#include <string>
#include <string_view>

#include "layoutrank/dom.hpp"

namespace layoutrank::style {

// Bumped whenever the tag table or the default sheet changes.
inline constexpr int kTableVersion = 1;

inline constexpr double kDefaultFontSize = 16.0;
inline constexpr double kLineHeightFactor = 1.2;
// Average rendered word width, in ems, including the trailing space.
inline constexpr double kWordWidthEm = 3.0;

dom::NodeType node_type_for_tag(std::string_view tag);

// Default declarations for a tag; empty for unknown tags.
const dom::StyleMap& default_style(std::string_view tag);

// "color: red; WIDTH:10px" -> {color: red, width: 10px}. Malformed
// declarations are dropped.
dom::StyleMap parse_style_attribute(std::string_view text);

// Default sheet overlaid with the inline declarations.
dom::StyleMap resolve_style(std::string_view tag, const dom::StyleMap& inline_style);

// Parses a CSS length to px. Percentages need a base; em scales by
// font_size, rem by the root default. Keywords yield nullopt.
std::optional<double> parse_length(std::string_view value, std::optional<double> percent_base,
                                   double font_size = kDefaultFontSize);

// First length found in a shorthand such as "2px solid red" or "10px 4px".
// "none" and "hidden" read as 0, thin/medium/thick as 1/3/5.
std::optional<double> first_length(std::string_view value, double font_size = kDefaultFontSize);

std::optional<std::string> lookup(const dom::StyleMap& style, std::string_view property);

enum class DisplayKind { Block, Inline, None };

// Everything the flow heuristic needs about one element, resolved from its
// style map against the width available in its containing block.
struct BoxProps {
  DisplayKind display = DisplayKind::Inline;
  bool out_of_flow = false;  // position: absolute | fixed
  double font_size = kDefaultFontSize;
  double line_height = kDefaultFontSize * kLineHeightFactor;
  std::optional<double> width;
  std::optional<double> height;
  double top = 0.0;
  double left = 0.0;
  // Default box for replaced elements (img, video, input, ...).
  std::optional<double> replaced_width;
  std::optional<double> replaced_height;
};

BoxProps box_props(std::string_view tag, const dom::StyleMap& style, double containing_width);

}  // namespace layoutrank::style

#endif  // LAYOUTRANK_STYLE_HPP
