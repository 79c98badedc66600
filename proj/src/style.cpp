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

#include "layoutrank/style.hpp"

#include <charconv>
#include <cmath>
#include <unordered_map>

#include "layoutrank/util.hpp"

namespace layoutrank::style {

using dom::NodeType;
using dom::StyleMap;

namespace {

const std::unordered_map<std::string_view, NodeType>& tag_table() {
  static const std::unordered_map<std::string_view, NodeType> table = {
      // text
      {"p", NodeType::Text}, {"span", NodeType::Text}, {"h1", NodeType::Text},
      {"h2", NodeType::Text}, {"h3", NodeType::Text}, {"h4", NodeType::Text},
      {"h5", NodeType::Text}, {"h6", NodeType::Text}, {"strong", NodeType::Text},
      {"b", NodeType::Text}, {"em", NodeType::Text}, {"i", NodeType::Text},
      {"u", NodeType::Text}, {"small", NodeType::Text}, {"li", NodeType::Text},
      {"blockquote", NodeType::Text}, {"pre", NodeType::Text}, {"code", NodeType::Text},
      {"td", NodeType::Text}, {"th", NodeType::Text}, {"caption", NodeType::Text},
      {"figcaption", NodeType::Text}, {"dt", NodeType::Text}, {"dd", NodeType::Text},
      {"label", NodeType::Text}, {"title", NodeType::Text}, {"cite", NodeType::Text},
      {"q", NodeType::Text}, {"mark", NodeType::Text}, {"sub", NodeType::Text},
      {"sup", NodeType::Text}, {"abbr", NodeType::Text},
      // image
      {"img", NodeType::Image}, {"picture", NodeType::Image}, {"svg", NodeType::Image},
      {"canvas", NodeType::Image},
      // video
      {"video", NodeType::Video}, {"audio", NodeType::Video}, {"iframe", NodeType::Video},
      {"embed", NodeType::Video}, {"object", NodeType::Video},
      // container
      {"html", NodeType::Container}, {"body", NodeType::Container}, {"div", NodeType::Container},
      {"section", NodeType::Container}, {"article", NodeType::Container},
      {"main", NodeType::Container}, {"header", NodeType::Container},
      {"footer", NodeType::Container}, {"nav", NodeType::Container},
      {"aside", NodeType::Container}, {"ul", NodeType::Container}, {"ol", NodeType::Container},
      {"dl", NodeType::Container}, {"table", NodeType::Container},
      {"thead", NodeType::Container}, {"tbody", NodeType::Container},
      {"tfoot", NodeType::Container}, {"tr", NodeType::Container},
      {"figure", NodeType::Container}, {"fieldset", NodeType::Container},
      {"center", NodeType::Container},
      // interactive
      {"a", NodeType::Interactive}, {"button", NodeType::Interactive},
      {"input", NodeType::Interactive}, {"select", NodeType::Interactive},
      {"option", NodeType::Interactive}, {"textarea", NodeType::Interactive},
      {"form", NodeType::Interactive}, {"details", NodeType::Interactive},
      {"summary", NodeType::Interactive},
  };
  return table;
}

StyleMap sheet(std::initializer_list<std::pair<const std::string, std::string>> decls) {
  return StyleMap(decls);
}

const std::unordered_map<std::string_view, StyleMap>& default_sheet() {
  static const std::unordered_map<std::string_view, StyleMap> table = [] {
    std::unordered_map<std::string_view, StyleMap> t;
    for (auto tag : {"html", "div", "section", "article", "main", "header", "footer", "nav",
                     "aside", "figure", "figcaption", "address", "dl", "dt", "table", "thead",
                     "tbody", "tfoot", "tr", "fieldset", "details", "summary", "caption"}) {
      t[tag] = sheet({{"display", "block"}});
    }
    t["body"] = sheet({{"display", "block"}, {"margin", "8px"}, {"font-size", "16px"}});
    t["form"] = sheet({{"display", "block"}});
    t["p"] = sheet({{"display", "block"}, {"margin", "16px"}});
    t["blockquote"] = sheet({{"display", "block"}, {"margin", "40px"}});
    t["dd"] = sheet({{"display", "block"}, {"margin", "40px"}});
    t["pre"] = sheet({{"display", "block"}, {"margin", "13px"}, {"font-size", "13px"}});
    t["ul"] = sheet({{"display", "block"}, {"margin", "16px"}, {"padding", "40px"}});
    t["ol"] = sheet({{"display", "block"}, {"margin", "16px"}, {"padding", "40px"}});
    t["li"] = sheet({{"display", "list-item"}});
    t["center"] = sheet({{"display", "block"}, {"text-align", "center"}});
    t["hr"] = sheet({{"display", "block"}, {"border", "1px inset"}, {"margin", "8px"}});
    t["h1"] = sheet({{"display", "block"}, {"font-size", "32px"}, {"font-weight", "bold"}, {"margin", "21px"}});
    t["h2"] = sheet({{"display", "block"}, {"font-size", "24px"}, {"font-weight", "bold"}, {"margin", "20px"}});
    t["h3"] = sheet({{"display", "block"}, {"font-size", "19px"}, {"font-weight", "bold"}, {"margin", "19px"}});
    t["h4"] = sheet({{"display", "block"}, {"font-size", "16px"}, {"font-weight", "bold"}, {"margin", "21px"}});
    t["h5"] = sheet({{"display", "block"}, {"font-size", "13px"}, {"font-weight", "bold"}, {"margin", "22px"}});
    t["h6"] = sheet({{"display", "block"}, {"font-size", "11px"}, {"font-weight", "bold"}, {"margin", "25px"}});
    for (auto tag : {"head", "title", "meta", "link", "base", "template", "noscript", "param",
                     "source", "track"}) {
      t[tag] = sheet({{"display", "none"}});
    }
    for (auto tag : {"span", "a", "label", "code", "cite", "q", "mark", "sub", "sup", "abbr",
                     "u", "font", "img", "picture", "svg", "canvas", "video", "audio", "iframe",
                     "embed", "object", "br", "select", "option", "textarea", "input"}) {
      t[tag] = sheet({{"display", "inline"}});
    }
    t["b"] = sheet({{"display", "inline"}, {"font-weight", "bold"}});
    t["strong"] = sheet({{"display", "inline"}, {"font-weight", "bold"}});
    t["i"] = sheet({{"display", "inline"}, {"font-style", "italic"}});
    t["em"] = sheet({{"display", "inline"}, {"font-style", "italic"}});
    t["small"] = sheet({{"display", "inline"}, {"font-size", "13px"}});
    t["button"] = sheet({{"display", "inline-block"}, {"padding", "2px"}, {"border", "2px outset"}});
    t["td"] = sheet({{"display", "table-cell"}, {"padding", "1px"}});
    t["th"] = sheet({{"display", "table-cell"}, {"padding", "1px"}, {"font-weight", "bold"},
                     {"text-align", "center"}});
    return t;
  }();
  return table;
}

struct ReplacedSize {
  double width;
  double height;
};

std::optional<ReplacedSize> replaced_size(std::string_view tag) {
  static const std::unordered_map<std::string_view, ReplacedSize> table = {
      {"img", {300, 150}},   {"picture", {300, 150}}, {"svg", {300, 150}},
      {"canvas", {300, 150}}, {"video", {300, 150}},  {"iframe", {300, 150}},
      {"embed", {300, 150}}, {"object", {300, 150}},  {"audio", {300, 54}},
      {"input", {150, 20}},  {"select", {100, 20}},   {"textarea", {200, 40}},
  };
  auto it = table.find(tag);
  if (it == table.end()) return std::nullopt;
  return it->second;
}

std::optional<double> parse_number(std::string_view s) {
  if (s.empty()) return std::nullopt;
  if (s.front() == '+') s.remove_prefix(1);
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  if (!std::isfinite(value)) return std::nullopt;
  return value;
}

}  // namespace

NodeType node_type_for_tag(std::string_view tag) {
  auto it = tag_table().find(tag);
  return it == tag_table().end() ? NodeType::Other : it->second;
}

const StyleMap& default_style(std::string_view tag) {
  static const StyleMap empty;
  auto it = default_sheet().find(tag);
  return it == default_sheet().end() ? empty : it->second;
}

StyleMap parse_style_attribute(std::string_view text) {
  StyleMap out;
  for (const auto& decl : split(text, ';')) {
    auto colon = decl.find(':');
    if (colon == std::string::npos) continue;
    auto name = to_lower(trim(std::string_view(decl).substr(0, colon)));
    auto value = std::string(trim(std::string_view(decl).substr(colon + 1)));
    if (name.empty() || value.empty()) continue;
    bool valid_name = true;
    for (char c : name) {
      if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '-')) valid_name = false;
    }
    if (!valid_name) continue;
    out[name] = value;
  }
  return out;
}

StyleMap resolve_style(std::string_view tag, const StyleMap& inline_style) {
  StyleMap out = default_style(tag);
  for (const auto& [k, v] : inline_style) out[k] = v;
  return out;
}

std::optional<double> parse_length(std::string_view value, std::optional<double> percent_base,
                                   double font_size) {
  auto v = to_lower(trim(value));
  if (v.empty()) return std::nullopt;
  auto strip = [&](std::string_view suffix) -> std::optional<double> {
    return parse_number(trim(std::string_view(v).substr(0, v.size() - suffix.size())));
  };
  auto ends_with = [&](std::string_view suffix) {
    return v.size() > suffix.size() && v.compare(v.size() - suffix.size(), suffix.size(), suffix) == 0;
  };
  if (ends_with("px")) return strip("px");
  if (ends_with("rem")) {
    auto n = strip("rem");
    return n ? std::optional<double>(*n * kDefaultFontSize) : std::nullopt;
  }
  if (ends_with("em")) {
    auto n = strip("em");
    return n ? std::optional<double>(*n * font_size) : std::nullopt;
  }
  if (ends_with("pt")) {
    auto n = strip("pt");
    return n ? std::optional<double>(*n * 4.0 / 3.0) : std::nullopt;
  }
  if (ends_with("%")) {
    if (!percent_base) return std::nullopt;
    auto n = strip("%");
    return n ? std::optional<double>(*n / 100.0 * *percent_base) : std::nullopt;
  }
  return parse_number(v);
}

std::optional<double> first_length(std::string_view value, double font_size) {
  for (const auto& token : split(trim(value), ' ')) {
    auto t = to_lower(trim(token));
    if (t.empty()) continue;
    if (t == "none" || t == "hidden") return 0.0;
    if (t == "thin") return 1.0;
    if (t == "medium") return 3.0;
    if (t == "thick") return 5.0;
    if (auto len = parse_length(t, std::nullopt, font_size)) return len;
  }
  return std::nullopt;
}

std::optional<std::string> lookup(const StyleMap& style, std::string_view property) {
  auto it = style.find(std::string(property));
  if (it == style.end()) return std::nullopt;
  return to_lower(trim(it->second));
}

BoxProps box_props(std::string_view tag, const StyleMap& style, double containing_width) {
  BoxProps p;
  auto display = lookup(style, "display").value_or("inline");
  if (display == "none") {
    p.display = DisplayKind::None;
  } else if (display == "inline" || display == "inline-block" || display == "table-cell" ||
             display == "inline-flex" || display == "inline-table") {
    p.display = DisplayKind::Inline;
  } else {
    p.display = DisplayKind::Block;
  }
  auto position = lookup(style, "position").value_or("static");
  p.out_of_flow = position == "absolute" || position == "fixed";

  if (auto fs = lookup(style, "font-size")) {
    if (auto px = parse_length(*fs, kDefaultFontSize, kDefaultFontSize); px && *px > 0) {
      p.font_size = *px;
    }
  }
  p.line_height = p.font_size * kLineHeightFactor;
  if (auto lh = lookup(style, "line-height"); lh && *lh != "normal") {
    if (auto n = parse_number(*lh)) {
      if (*n > 0) p.line_height = *n * p.font_size;
    } else if (auto px = parse_length(*lh, p.font_size, p.font_size); px && *px > 0) {
      p.line_height = *px;
    }
  }
  if (auto w = lookup(style, "width")) {
    if (auto px = parse_length(*w, containing_width, p.font_size); px && *px >= 0) p.width = *px;
  }
  if (auto h = lookup(style, "height")) {
    if (auto px = parse_length(*h, std::nullopt, p.font_size); px && *px >= 0) p.height = *px;
  }
  if (p.out_of_flow) {
    if (auto t = lookup(style, "top")) p.top = parse_length(*t, containing_width, p.font_size).value_or(0.0);
    if (auto l = lookup(style, "left")) p.left = parse_length(*l, containing_width, p.font_size).value_or(0.0);
  }
  if (auto rs = replaced_size(tag)) {
    p.replaced_width = rs->width;
    p.replaced_height = rs->height;
  }
  return p;
}

}  // namespace layoutrank::style
