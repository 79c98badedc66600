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

// Tag-soup HTML parser. Tokenizes elements, attributes and text, skips
// comments, doctypes, processing instructions, scripts and style blocks,
// and repairs the common structural errors (unclosed elements, stray end
// tags, implicitly closed p/li/td/...) the way browsers do for the subset
// of HTML we care about. Never fails on malformed input; the only error is
// a document with no element at all.

#include <algorithm>
#include <cctype>
#include <string>
#include <unordered_set>

#include "layoutrank/dom.hpp"
#include "layoutrank/errors.hpp"
#include "layoutrank/style.hpp"
#include "layoutrank/util.hpp"

namespace layoutrank::dom {

namespace {

// Elements nested deeper than this are attached to the deepest allowed
// ancestor instead; keeps every later recursion bounded.
constexpr std::size_t kMaxDepth = 512;

bool is_void(std::string_view tag) {
  static const std::unordered_set<std::string_view> tags = {
      "area", "base", "br", "col", "embed", "hr", "img", "input", "link",
      "meta", "param", "source", "track", "wbr", "keygen"};
  return tags.count(tag) > 0;
}

bool closes_p(std::string_view tag) {
  static const std::unordered_set<std::string_view> tags = {
      "address", "article", "aside", "blockquote", "center", "details", "dl", "div",
      "fieldset", "figcaption", "figure", "footer", "form", "h1", "h2", "h3", "h4", "h5",
      "h6", "header", "hr", "main", "nav", "ol", "p", "pre", "section", "table", "ul", "li",
      "dd", "dt"};
  return tags.count(tag) > 0;
}

bool is_heading(std::string_view tag) {
  return tag.size() == 2 && tag[0] == 'h' && tag[1] >= '1' && tag[1] <= '6';
}

bool is_name_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == ':' || c == '_' || c == '.';
}

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

struct RawNode {
  std::string tag;
  StyleMap inline_style;
  std::size_t words = 0;
  std::vector<std::size_t> children;
};

class TreeBuilder {
 public:
  void start_tag(std::string tag, StyleMap inline_style, bool self_closing) {
    if ((tag == "html" || tag == "body") && has_open(tag)) return;
    apply_implicit_closes(tag);

    std::size_t id = nodes_.size();
    nodes_.push_back(RawNode{std::move(tag), std::move(inline_style), 0, {}});
    if (stack_.empty()) {
      top_level_.push_back(id);
    } else {
      nodes_[stack_.back()].children.push_back(id);
    }
    const auto& t = nodes_[id].tag;
    if (!self_closing && !is_void(t) && stack_.size() < kMaxDepth) stack_.push_back(id);
  }

  void end_tag(std::string_view tag) {
    for (std::size_t i = stack_.size(); i-- > 0;) {
      if (nodes_[stack_[i]].tag == tag) {
        stack_.resize(i);
        return;
      }
    }
    // stray end tag: ignored
  }

  void text(std::string_view chunk) {
    if (stack_.empty()) return;
    nodes_[stack_.back()].words += count_words(chunk);
  }

  DomTree finish(std::string url, std::string category) {
    if (nodes_.empty()) throw EmptyDocument("no element could be recovered");
    std::size_t root = top_level_.front();
    if (top_level_.size() > 1) {
      // fragment with several top-level elements: wrap in a synthetic html root
      root = nodes_.size();
      nodes_.push_back(RawNode{"html", {}, 0, top_level_});
    }

    DomTree tree;
    tree.source_url = std::move(url);
    tree.category = std::move(category);
    tree.nodes.reserve(nodes_.size());
    // pre-order renumbering, children kept in document order
    std::vector<std::pair<std::size_t, std::size_t>> stack{{root, SIZE_MAX}};
    while (!stack.empty()) {
      auto [raw_id, parent] = stack.back();
      stack.pop_back();
      auto& raw = nodes_[raw_id];
      DomNode node;
      node.node_id = tree.nodes.size();
      node.tag_name = raw.tag;
      node.node_type = style::node_type_for_tag(raw.tag);
      node.style = style::resolve_style(raw.tag, raw.inline_style);
      node.text_length = raw.words;
      if (parent != SIZE_MAX) tree.nodes[parent].children.push_back(node.node_id);
      for (auto it = raw.children.rbegin(); it != raw.children.rend(); ++it) {
        stack.emplace_back(*it, node.node_id);
      }
      tree.nodes.push_back(std::move(node));
    }
    tree.root_id = 0;
    return tree;
  }

 private:
  bool has_open(std::string_view tag) const {
    return std::any_of(stack_.begin(), stack_.end(),
                       [&](std::size_t id) { return nodes_[id].tag == tag; });
  }

  // Pops up to and including the nearest open `target`, unless one of the
  // `barriers` is found first.
  void close_through(std::initializer_list<std::string_view> targets,
                     std::initializer_list<std::string_view> barriers) {
    for (std::size_t i = stack_.size(); i-- > 0;) {
      const auto& t = nodes_[stack_[i]].tag;
      if (std::find(targets.begin(), targets.end(), t) != targets.end()) {
        stack_.resize(i);
        return;
      }
      if (std::find(barriers.begin(), barriers.end(), t) != barriers.end()) return;
    }
  }

  void apply_implicit_closes(std::string_view tag) {
    if (closes_p(tag)) close_through({"p"}, {"button", "table", "td", "th", "html", "body"});
    if (tag == "li") close_through({"li"}, {"ul", "ol", "table"});
    if (tag == "dt" || tag == "dd") close_through({"dt", "dd"}, {"dl", "table"});
    if (tag == "tr") close_through({"tr"}, {"table"});
    if (tag == "td" || tag == "th" || tag == "tr") close_through({"td", "th"}, {"tr", "table"});
    if (tag == "option") close_through({"option"}, {"select"});
    if (is_heading(tag) && !stack_.empty() && is_heading(nodes_[stack_.back()].tag)) {
      stack_.pop_back();
    }
  }

  std::vector<RawNode> nodes_;
  std::vector<std::size_t> stack_;
  std::vector<std::size_t> top_level_;
};

class Tokenizer {
 public:
  Tokenizer(std::string_view src, TreeBuilder& builder) : src_(src), out_(builder) {}

  void run() {
    while (pos_ < src_.size()) {
      if (src_[pos_] == '<' && pos_ + 1 < src_.size()) {
        char next = src_[pos_ + 1];
        if (next == '!') {
          markup_declaration();
          continue;
        }
        if (next == '?') {
          skip_past(">");
          continue;
        }
        if (next == '/') {
          end_tag();
          continue;
        }
        if (std::isalpha(static_cast<unsigned char>(next))) {
          start_tag();
          continue;
        }
      }
      text_run();
    }
  }

 private:
  void text_run() {
    auto start = pos_;
    ++pos_;  // a lone '<' that opens nothing is text
    while (pos_ < src_.size() && src_[pos_] != '<') ++pos_;
    out_.text(src_.substr(start, pos_ - start));
  }

  void skip_past(std::string_view marker) {
    auto found = src_.find(marker, pos_);
    pos_ = found == std::string_view::npos ? src_.size() : found + marker.size();
  }

  void markup_declaration() {
    if (src_.substr(pos_, 4) == "<!--") {
      pos_ += 4;
      skip_past("-->");
    } else if (src_.substr(pos_, 9) == "<![CDATA[") {
      skip_past("]]>");
    } else {
      skip_past(">");  // doctype and bogus comments
    }
  }

  std::string read_name() {
    auto start = pos_;
    while (pos_ < src_.size() && is_name_char(src_[pos_])) ++pos_;
    return to_lower(src_.substr(start, pos_ - start));
  }

  void skip_spaces() {
    while (pos_ < src_.size() && is_space(src_[pos_])) ++pos_;
  }

  void end_tag() {
    pos_ += 2;
    auto name = read_name();
    skip_past(">");
    if (!name.empty()) out_.end_tag(name);
  }

  void start_tag() {
    ++pos_;
    auto name = read_name();
    StyleMap inline_style;
    bool self_closing = false;
    while (pos_ < src_.size()) {
      skip_spaces();
      if (pos_ >= src_.size()) break;
      char c = src_[pos_];
      if (c == '>') {
        ++pos_;
        break;
      }
      if (c == '/') {
        ++pos_;
        if (pos_ < src_.size() && src_[pos_] == '>') {
          self_closing = true;
          ++pos_;
          break;
        }
        continue;
      }
      auto attr_start = pos_;
      while (pos_ < src_.size() && !is_space(src_[pos_]) && src_[pos_] != '=' &&
             src_[pos_] != '>' && src_[pos_] != '/') {
        ++pos_;
      }
      if (pos_ == attr_start) {
        ++pos_;  // e.g. a stray '=' with no name
        continue;
      }
      auto attr = to_lower(src_.substr(attr_start, pos_ - attr_start));
      skip_spaces();
      std::string_view value;
      if (pos_ < src_.size() && src_[pos_] == '=') {
        ++pos_;
        skip_spaces();
        value = attribute_value();
      }
      if (attr == "style") inline_style = style::parse_style_attribute(value);
    }

    if (name == "script" || name == "style") {
      skip_raw_text(name);
      return;
    }
    out_.start_tag(name, std::move(inline_style), self_closing);
    if (!self_closing && (name == "title" || name == "textarea")) {
      auto end = find_end_tag(name);
      out_.text(src_.substr(pos_, end - pos_));
      pos_ = end;
    }
  }

  std::string_view attribute_value() {
    if (pos_ >= src_.size()) return {};
    char q = src_[pos_];
    if (q == '"' || q == '\'') {
      ++pos_;
      auto start = pos_;
      auto end = src_.find(q, pos_);
      if (end == std::string_view::npos) end = src_.size();
      pos_ = std::min(end + 1, src_.size());
      return src_.substr(start, end - start);
    }
    auto start = pos_;
    while (pos_ < src_.size() && !is_space(src_[pos_]) && src_[pos_] != '>') ++pos_;
    return src_.substr(start, pos_ - start);
  }

  // Position of the matching "</name" (case-insensitive) or end of input.
  std::size_t find_end_tag(std::string_view name) const {
    for (auto p = src_.find("</", pos_); p != std::string_view::npos; p = src_.find("</", p + 2)) {
      if (to_lower(src_.substr(p + 2, name.size())) == name) return p;
    }
    return src_.size();
  }

  void skip_raw_text(std::string_view name) {
    pos_ = find_end_tag(name);
    if (pos_ < src_.size()) skip_past(">");
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  TreeBuilder& out_;
};

}  // namespace

DomTree parse_html(std::string_view source, std::string url, std::string category) {
  TreeBuilder builder;
  Tokenizer(source, builder).run();
  return builder.finish(std::move(url), std::move(category));
}

}  // namespace layoutrank::dom
