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

#include "layoutrank/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <json.hpp>
#include <map>
#include <numeric>
#include <random>
#include <sstream>

#include "layoutrank/errors.hpp"
#include "layoutrank/util.hpp"

namespace layoutrank::synth {

using dom::NodeType;
using nlohmann::json;

std::string_view to_string(Profile profile) {
  switch (profile) {
    case Profile::Rich: return "rich";
    case Profile::Thin: return "thin";
    case Profile::Chaotic: break;
  }
  return "chaotic";
}

Profile profile_from_string(std::string_view name) {
  if (name == "rich") return Profile::Rich;
  if (name == "thin") return Profile::Thin;
  if (name == "chaotic") return Profile::Chaotic;
  throw BadSpec("unknown profile '" + std::string(name) + "'");
}

int label_for(Profile profile) { return profile == Profile::Rich ? 1 : 0; }

ProfileMix ProfileMix::parse(std::string_view text) {
  ProfileMix mix{0.0, 0.0, 0.0};
  bool seen[3] = {false, false, false};
  for (const auto& part : layoutrank::split(text, ',')) {
    auto item = trim(part);
    if (item.empty()) continue;
    auto colon = item.find(':');
    if (colon == std::string_view::npos) throw BadSpec("profile mix entry '" + std::string(item) + "' lacks ':'");
    auto profile = profile_from_string(trim(item.substr(0, colon)));
    double share = 0.0;
    try {
      std::size_t used = 0;
      std::string value(trim(item.substr(colon + 1)));
      share = std::stod(value, &used);
      if (used != value.size()) throw BadSpec("bad share '" + value + "'");
    } catch (const std::logic_error&) {
      throw BadSpec("bad share in '" + std::string(item) + "'");
    }
    if (!(share >= 0.0) || !std::isfinite(share)) throw BadSpec("negative share in '" + std::string(item) + "'");
    const auto slot = static_cast<std::size_t>(profile);
    if (seen[slot]) throw BadSpec("profile listed twice in mix");
    seen[slot] = true;
    (profile == Profile::Rich ? mix.rich : profile == Profile::Thin ? mix.thin : mix.chaotic) = share;
  }
  const double total = mix.rich + mix.thin + mix.chaotic;
  if (std::abs(total - 1.0) > 1e-9) throw BadSpec("profile shares sum to " + std::to_string(total));
  return mix;
}

std::vector<std::size_t> largest_remainder(std::size_t total, const std::vector<double>& weights) {
  double sum = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw BadSpec("weights must be finite and non-negative");
    sum += w;
  }
  if (weights.empty() || sum <= 0.0) throw BadSpec("weights must have a positive sum");
  std::vector<std::size_t> counts(weights.size());
  std::vector<std::pair<double, std::size_t>> remainders;
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const double exact = static_cast<double>(total) * weights[i] / sum;
    counts[i] = static_cast<std::size_t>(std::floor(exact));
    assigned += counts[i];
    remainders.emplace_back(exact - std::floor(exact), i);
  }
  // largest remainder first, ties to the lower index
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t k = 0; assigned < total; ++k, ++assigned) ++counts[remainders[k % remainders.size()].second];
  return counts;
}

// ---------------------------------------------------------------- generator

namespace {

const std::vector<std::string_view>& word_list() {
  static const std::vector<std::string_view> words = {
      "market", "river",  "garden", "signal", "window", "travel", "copper", "planet", "silver", "forest",
      "engine", "harbor", "meadow", "pocket", "rocket", "winter", "summer", "canvas", "thread", "bridge",
      "candle", "marble", "orchid", "pepper", "saddle", "timber", "velvet", "walnut", "yellow", "zephyr",
      "anchor", "basket", "cobalt", "dinner", "empire", "falcon", "guitar", "hollow", "island", "jacket"};
  return words;
}

struct Box {
  std::string tag;
  bool block = true;
  std::vector<std::pair<std::string, std::string>> style;  // emission order
  double font_size = 16.0;
  double line_height = 20.0;
  std::optional<double> width;
  std::optional<double> height;
  bool absolute = false;
  double top = 0.0;
  double left = 0.0;
  std::size_t words = 0;
  std::vector<std::size_t> children;
  std::optional<std::size_t> parent;
  dom::Geometry geometry;
};

NodeType type_of(std::string_view tag) {
  if (tag == "img") return NodeType::Image;
  if (tag == "video") return NodeType::Video;
  if (tag == "a" || tag == "button" || tag == "input") return NodeType::Interactive;
  if (tag == "p" || tag == "span" || tag == "h1" || tag == "h2" || tag == "h3" || tag == "li") {
    return NodeType::Text;
  }
  return NodeType::Container;
}

std::string px(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%gpx", v);
  return buf;
}

class PageBuilder {
 public:
  explicit PageBuilder(std::uint64_t seed) : rng_(seed) {}

  int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  bool coin(double p) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng_) < p; }
  template <typename T>
  const T& pick(const std::vector<T>& items) {
    return items[static_cast<std::size_t>(uniform(0, static_cast<int>(items.size()) - 1))];
  }

  struct Spec {
    std::string tag;
    std::string display = "block";
    double font_size = 16;
    double line_height = 20;
    std::string font_weight = "normal";
    double margin = 0;
    double padding = 0;
    std::size_t words = 0;
    std::optional<double> width;
    std::optional<double> height;
    std::optional<std::string> font_style;
    std::optional<std::string> text_align;
    std::optional<double> border;
    bool absolute = false;
    double top = 0;
    double left = 0;
  };

  std::size_t add(std::optional<std::size_t> parent, const Spec& s) {
    Box b;
    b.tag = s.tag;
    b.block = s.display == "block";
    b.font_size = s.font_size;
    b.line_height = s.line_height;
    b.width = s.width;
    b.height = s.height;
    b.absolute = s.absolute;
    b.top = s.top;
    b.left = s.left;
    b.words = s.words;
    b.parent = parent;
    b.style.emplace_back("display", s.display);
    if (s.absolute) {
      b.style.emplace_back("position", "absolute");
      b.style.emplace_back("top", px(s.top));
      b.style.emplace_back("left", px(s.left));
    }
    if (s.width) b.style.emplace_back("width", px(*s.width));
    if (s.height) b.style.emplace_back("height", px(*s.height));
    b.style.emplace_back("font-size", px(s.font_size));
    b.style.emplace_back("line-height", px(s.line_height));
    b.style.emplace_back("font-weight", s.font_weight);
    if (s.font_style) b.style.emplace_back("font-style", *s.font_style);
    if (s.text_align) b.style.emplace_back("text-align", *s.text_align);
    b.style.emplace_back("margin", px(s.margin));
    b.style.emplace_back("padding", px(s.padding));
    if (s.border) b.style.emplace_back("border", px(*s.border) + " solid");
    const auto id = boxes_.size();
    boxes_.push_back(std::move(b));
    if (parent) boxes_[*parent].children.push_back(id);
    return id;
  }

  std::vector<Box>& boxes() { return boxes_; }

  std::string words(std::size_t n) {
    std::string out;
    for (std::size_t i = 0; i < n; ++i) {
      if (i) out += ' ';
      out += pick(word_list());
    }
    return out;
  }

 private:
  std::mt19937_64 rng_;
  std::vector<Box> boxes_;
};

using Spec = PageBuilder::Spec;

Spec block(std::string tag, double fs, std::size_t words = 0) {
  Spec s;
  s.tag = std::move(tag);
  s.font_size = fs;
  s.line_height = fs + 4;
  s.words = words;
  return s;
}

Spec inline_box(std::string tag, double fs, std::size_t words = 0) {
  auto s = block(std::move(tag), fs, words);
  s.display = "inline";
  return s;
}

void build_rich(PageBuilder& b, std::size_t body, double page_width) {
  auto header = b.add(body, block("header", 16));
  auto h1 = block("h1", b.uniform(28, 36), b.uniform(3, 8));
  h1.font_weight = "bold";
  h1.margin = 16;
  b.add(header, h1);
  auto nav = b.add(header, block("nav", 16));
  for (int i = 0, n = b.uniform(3, 6); i < n; ++i) {
    auto a = inline_box("a", 15, b.uniform(1, 2));
    a.padding = 4;
    b.add(nav, a);
  }
  for (int s = 0, n = b.uniform(2, 4); s < n; ++s) {
    auto section = b.add(body, block("section", 16));
    auto h2 = block("h2", b.uniform(22, 26), b.uniform(3, 7));
    h2.font_weight = "bold";
    h2.margin = 12;
    b.add(section, h2);
    auto row = b.add(section, block("div", 16));
    auto img = inline_box("img", 16);
    img.width = b.uniform(20, 40) * 10;
    img.height = b.uniform(12, 24) * 10;
    b.add(row, img);
    auto caption = inline_box("span", 16, b.uniform(30, 70));
    caption.display = "inline-block";
    caption.width = std::min(600.0, page_width - *img.width);
    b.add(row, caption);
    auto p = block("p", 16, b.uniform(20, 60));
    p.margin = 16;
    p.text_align = "left";
    b.add(section, p);
    if (b.coin(0.6)) {
      auto ul = b.add(section, block("ul", 16));
      for (int i = 0, m = b.uniform(3, 5); i < m; ++i) b.add(ul, block("li", 16, b.uniform(3, 10)));
    }
  }
  auto actions = b.add(body, block("div", 16));
  for (int i = 0, n = b.uniform(1, 3); i < n; ++i) {
    auto button = inline_box("button", 16, b.uniform(1, 2));
    button.display = "inline-block";
    button.padding = 6;
    button.border = 1;
    b.add(actions, button);
  }
  auto footer = b.add(body, block("footer", 12));
  b.add(footer, block("p", 12, b.uniform(5, 15)));
  for (int i = 0, n = b.uniform(1, 3); i < n; ++i) b.add(footer, inline_box("a", 12, b.uniform(1, 2)));
}

void build_thin(PageBuilder& b, std::size_t body) {
  auto div = b.add(body, block("div", 16));
  std::size_t budget = 29;
  if (b.coin(0.5)) {
    auto h = block("h1", b.uniform(20, 32), b.uniform(2, 5));
    h.font_weight = "bold";
    budget -= h.words;
    b.add(div, h);
  }
  b.add(div, block("p", 16, b.uniform(3, static_cast<int>(std::min<std::size_t>(20, budget)))));
  if (b.coin(0.4)) {
    auto img = inline_box("img", 16);
    img.width = b.uniform(10, 30) * 10;
    img.height = b.uniform(10, 20) * 10;
    b.add(div, img);
  }
}

void build_chaotic(PageBuilder& b, std::size_t body, double page_width) {
  static const std::vector<std::string> weights = {"100", "300", "normal", "bold", "900"};
  auto random_font = [&](Spec& s) {
    s.font_size = b.uniform(8, 40);
    s.line_height = s.font_size + b.uniform(-2, 12);
    s.font_weight = b.pick(weights);
    if (b.coin(0.4)) s.font_style = "italic";
  };
  for (int i = 0, n = b.uniform(4, 9); i < n; ++i) {
    auto panel = block("div", 16);
    panel.absolute = b.coin(0.8);
    if (panel.absolute) {
      panel.top = b.uniform(0, 60) * 10;
      panel.left = b.uniform(0, static_cast<int>(page_width / 20)) * 10;
    }
    panel.width = b.uniform(15, 70) * 10;
    if (b.coin(0.4)) panel.height = b.uniform(5, 30) * 10;
    auto pid = b.add(body, panel);
    for (int j = 0, m = b.uniform(1, 4); j < m; ++j) {
      const int kind = b.uniform(0, 3);
      if (kind == 0) {
        auto img = inline_box("img", 16);
        img.width = b.uniform(5, 40) * 10;
        img.height = b.uniform(5, 30) * 10;
        b.add(pid, img);
      } else if (kind == 1) {
        auto a = inline_box("a", 16, b.uniform(1, 6));
        random_font(a);
        b.add(pid, a);
      } else {
        auto span = inline_box("span", 16, b.uniform(3, 30));
        random_font(span);
        b.add(pid, span);
      }
    }
  }
}

class GeneratorLayout {
 public:
  GeneratorLayout(std::vector<Box>& boxes, const dom::Viewport& viewport) : boxes_(boxes), viewport_(viewport) {}

  void run() {
    auto& root = boxes_[0];
    place(0, 0.0, 0.0, viewport_.width, false);
    if (!root.height) root.geometry.height = std::max(root.geometry.height, std::round(viewport_.height));
    clip(0);
  }

 private:
  double text_width(const Box& b) const { return static_cast<double>(b.words) * (3.0 * b.font_size); }

  double intrinsic(std::size_t id, double avail) const {
    const auto& b = boxes_[id];
    if (b.width) return std::round(std::min(*b.width, avail));
    double content = text_width(b);
    for (auto c : b.children) {
      if (!boxes_[c].absolute) content += intrinsic(c, avail);
    }
    return std::round(std::min(content, avail));
  }

  double place(std::size_t id, double x, double y, double avail, bool absolute) {
    auto& b = boxes_[id];
    double w;
    if (b.width) {
      w = absolute ? *b.width : std::min(*b.width, avail);
    } else {
      w = b.block ? avail : intrinsic(id, avail);
    }
    w = std::round(std::max(w, 0.0));
    double text_h = 0.0;
    if (b.words > 0 && w > 0) text_h = std::round(std::ceil(text_width(b) / w) * b.line_height);

    double cursor = y + text_h;
    double row_x = 0.0;
    double row_h = 0.0;
    for (auto c : b.children) {
      auto& child = boxes_[c];
      if (child.absolute) {
        place(c, std::max(0.0, std::round(x + child.left)), std::max(0.0, std::round(y + child.top)), w, true);
      } else if (child.block) {
        if (row_x > 0) {
          cursor += row_h;
          row_x = row_h = 0.0;
        }
        cursor += place(c, x, cursor, w, false);
      } else {
        const double cw = intrinsic(c, w);
        if (row_x > 0 && row_x + cw > w) {
          cursor += row_h;
          row_x = row_h = 0.0;
        }
        const double ch = place(c, x + row_x, cursor, w - row_x, false);
        row_x += child.geometry.width;
        row_h = std::max(row_h, ch);
      }
    }
    cursor += row_h;
    const double h = std::round(std::max(b.height ? *b.height : cursor - y, 0.0));
    b.geometry = dom::Geometry{h, w, x, y};
    return h;
  }

  void clip(std::size_t id) {
    const auto box = boxes_[id].geometry;
    const double bottom = box.ypos + box.height;
    for (auto c : boxes_[id].children) {
      auto& g = boxes_[c].geometry;
      if (!boxes_[c].absolute) {
        g.ypos = std::min(g.ypos, bottom);
        g.height = std::min(g.height, bottom - g.ypos);
      }
      clip(c);
    }
  }

  std::vector<Box>& boxes_;
  const dom::Viewport& viewport_;
};

// Raw features as the ingest path should see them, derived from the box
// properties the generator chose.
graph::RawFeatureMap raw_features_of(const Box& b) {
  graph::RawFeatureMap f;
  f["height"] = b.geometry.height;
  f["width"] = b.geometry.width;
  f["xpos"] = b.geometry.xpos;
  f["ypos"] = b.geometry.ypos;
  f["word_count"] = static_cast<double>(b.words);
  f["tag_name"] = b.tag;
  f["node_type"] = std::string(dom::to_string(type_of(b.tag)));
  f["font_size"] = b.font_size;
  f["line_height"] = b.line_height;
  for (const auto& [key, value] : b.style) {
    if (key == "display") f["display"] = value;
    if (key == "position") f["position"] = value;
    if (key == "font-weight") f["font_weight"] = value;
    if (key == "font-style") f["font_style"] = value;
    if (key == "text-align") f["text_align"] = value;
  }
  auto number = [&](const char* key) {
    for (const auto& [k, v] : b.style) {
      if (k == key) return std::stod(v);  // "<n>px" or "<n>px solid"
    }
    return -1.0;
  };
  f["margin"] = number("margin");
  f["padding"] = number("padding");
  if (double border = number("border"); border >= 0) f["border"] = border;
  return f;
}

std::string emit_html(const std::vector<Box>& boxes, PageBuilder& b) {
  std::string out = "<!DOCTYPE html>\n";
  // iterative pre-order with explicit close markers
  std::vector<std::pair<std::size_t, bool>> stack{{0, false}};
  while (!stack.empty()) {
    auto [id, closing] = stack.back();
    stack.pop_back();
    const auto& box = boxes[id];
    if (closing) {
      out += "</" + box.tag + ">";
      if (box.block) out += '\n';
      continue;
    }
    out += '<' + box.tag + " style=\"";
    for (std::size_t i = 0; i < box.style.size(); ++i) {
      if (i) out += "; ";
      out += box.style[i].first + ": " + box.style[i].second;
    }
    out += '"';
    if (box.tag == "img") {
      out += " src=\"img" + std::to_string(id) + ".png\" alt=\"\">";
      continue;
    }
    if (box.tag == "a") out += " href=\"#\"";
    out += '>';
    if (box.words > 0) out += b.words(box.words);
    stack.emplace_back(id, true);
    for (auto it = box.children.rbegin(); it != box.children.rend(); ++it) stack.emplace_back(*it, false);
  }
  return out;
}

}  // namespace

Document generate_document(Profile profile, std::string category, std::string url, std::uint64_t seed,
                           const dom::Viewport& viewport) {
  PageBuilder b(seed);
  auto root = block("html", 16);
  auto html = b.add(std::nullopt, root);
  auto body_spec = block("body", 16);
  body_spec.margin = 8;
  auto body = b.add(html, body_spec);
  switch (profile) {
    case Profile::Rich: build_rich(b, body, viewport.width); break;
    case Profile::Thin: build_thin(b, body); break;
    case Profile::Chaotic: build_chaotic(b, body, viewport.width); break;
  }
  auto& boxes = b.boxes();
  GeneratorLayout(boxes, viewport).run();

  Document doc;
  doc.url = std::move(url);
  doc.category = std::move(category);
  doc.profile = profile;
  doc.label = label_for(profile);
  doc.html = emit_html(boxes, b);
  for (std::size_t id = 0; id < boxes.size(); ++id) {
    const auto& box = boxes[id];
    ManifestNode node;
    node.node_id = id;
    node.parent_id = box.parent;
    node.tag_name = box.tag;
    node.node_type = type_of(box.tag);
    for (const auto& [k, v] : box.style) node.style[k] = v;
    node.geometry = box.geometry;
    node.text_length = box.words;
    node.raw_features = raw_features_of(box);
    doc.nodes.push_back(std::move(node));
  }
  return doc;
}

std::string Document::manifest_json() const {
  json j;
  j["url"] = url;
  j["category"] = category;
  j["profile"] = std::string(to_string(profile));
  j["label"] = label;
  json nodes_json = json::array();
  for (const auto& n : nodes) {
    json raw = json::object();
    for (const auto& [k, v] : n.raw_features) {
      if (const auto* d = std::get_if<double>(&v)) {
        raw[k] = *d;
      } else {
        raw[k] = std::get<std::string>(v);
      }
    }
    nodes_json.push_back({{"node_id", n.node_id},
                          {"parent_id", n.parent_id ? json(*n.parent_id) : json(nullptr)},
                          {"tag_name", n.tag_name},
                          {"node_type", std::string(dom::to_string(n.node_type))},
                          {"style", n.style},
                          {"geometry",
                           {{"height", n.geometry.height},
                            {"width", n.geometry.width},
                            {"xpos", n.geometry.xpos},
                            {"ypos", n.geometry.ypos}}},
                          {"text_length", n.text_length},
                          {"raw_features", std::move(raw)}});
  }
  j["nodes"] = std::move(nodes_json);
  return j.dump();
}

dom::DomTree Document::tree() const {
  dom::DomTree t;
  t.source_url = url;
  t.category = category;
  t.root_id = 0;
  for (const auto& n : nodes) {
    dom::DomNode d;
    d.node_id = n.node_id;
    d.tag_name = n.tag_name;
    d.node_type = n.node_type;
    d.style = n.style;
    d.geometry = n.geometry;
    d.text_length = n.text_length;
    t.nodes.push_back(std::move(d));
  }
  for (const auto& n : nodes) {
    if (n.parent_id) t.nodes[*n.parent_id].children.push_back(n.node_id);
  }
  return t;
}

std::vector<Document> generate(const SynthSpec& spec) {
  if (spec.n == 0) throw BadSpec("n must be at least 1");
  if (spec.categories == 0) throw BadSpec("need at least one category");
  std::vector<double> cat_weights = spec.category_weights;
  if (cat_weights.empty()) cat_weights.assign(spec.categories, 1.0);
  if (cat_weights.size() != spec.categories) {
    throw BadSpec("got " + std::to_string(cat_weights.size()) + " category weights for " +
                  std::to_string(spec.categories) + " categories");
  }
  const std::vector<double> mix = {spec.mix.rich, spec.mix.thin, spec.mix.chaotic};
  const Profile profiles[] = {Profile::Rich, Profile::Thin, Profile::Chaotic};

  // exact per-category profile counts, then a seeded shuffle of the order
  std::vector<std::pair<std::size_t, Profile>> plan;
  const auto per_category = largest_remainder(spec.n, cat_weights);
  for (std::size_t c = 0; c < spec.categories; ++c) {
    const auto counts = largest_remainder(per_category[c], mix);
    for (std::size_t p = 0; p < 3; ++p) {
      for (std::size_t k = 0; k < counts[p]; ++k) plan.emplace_back(c, profiles[p]);
    }
  }
  std::mt19937_64 rng(mix_seed(spec.seed, 0x706c616eULL));
  std::shuffle(plan.begin(), plan.end(), rng);

  std::vector<Document> docs;
  docs.reserve(plan.size());
  for (std::size_t i = 0; i < plan.size(); ++i) {
    char id[32];
    std::snprintf(id, sizeof id, "%06zu", i);
    const auto category = "cat" + std::to_string(plan[i].first);
    docs.push_back(generate_document(plan[i].second, category,
                                     "https://" + category + ".synth.test/page/" + id + ".html",
                                     mix_seed(spec.seed, i), spec.viewport));
  }
  return docs;
}

Split split(const std::vector<Document>& docs, const SplitRatios& ratios, std::uint64_t seed) {
  const double total = ratios.train + ratios.eval + ratios.test;
  if (!(ratios.train >= 0 && ratios.eval >= 0 && ratios.test >= 0) || std::abs(total - 1.0) > 1e-9) {
    throw BadRatios("split ratios must be non-negative and sum to 1");
  }
  std::map<std::pair<std::string, int>, std::vector<std::size_t>> strata;
  for (std::size_t i = 0; i < docs.size(); ++i) strata[{docs[i].category, docs[i].label}].push_back(i);
  Split out;
  std::mt19937_64 rng(mix_seed(seed, 0x73706c6974ULL));
  for (auto& [key, members] : strata) {
    std::shuffle(members.begin(), members.end(), rng);
    const auto counts = largest_remainder(members.size(), {ratios.train, ratios.eval, ratios.test});
    auto it = members.begin();
    out.train.insert(out.train.end(), it, it + static_cast<std::ptrdiff_t>(counts[0]));
    it += static_cast<std::ptrdiff_t>(counts[0]);
    out.eval.insert(out.eval.end(), it, it + static_cast<std::ptrdiff_t>(counts[1]));
    it += static_cast<std::ptrdiff_t>(counts[1]);
    out.test.insert(out.test.end(), it, members.end());
  }
  std::sort(out.train.begin(), out.train.end());
  std::sort(out.eval.begin(), out.eval.end());
  std::sort(out.test.begin(), out.test.end());
  return out;
}

void write_corpus(const std::filesystem::path& out, const std::vector<Document>& docs,
                  const CorpusLayout& layout, std::uint64_t seed) {
  std::ostringstream index, labels, splits, manifest, lists;
  index << "#url\tcategory\thtml\tprerendered\n";
  labels << "#url\tlabel\n";
  splits << "#url\tsplit\n";
  for (std::size_t i = 0; i < docs.size(); ++i) {
    const auto& d = docs[i];
    char name[32];
    std::snprintf(name, sizeof name, "%06zu", i);
    const auto html_rel = std::string("html/") + name + ".html";
    write_file(out / html_rel, d.html);
    std::string pre_rel = "-";
    if (layout.emit_prerendered) {
      pre_rel = std::string("prerendered/") + name + ".jsonl";
      write_file(out / pre_rel, dom::export_prerendered(d.tree()));
    }
    index << d.url << '\t' << d.category << '\t' << html_rel << '\t' << pre_rel << '\n';
    labels << d.url << '\t' << d.label << '\n';
    manifest << d.manifest_json() << '\n';
  }
  const auto parts = split(docs, layout.ratios, seed);
  std::vector<std::string_view> which(docs.size());
  for (auto i : parts.train) which[i] = "train";
  for (auto i : parts.eval) which[i] = "eval";
  for (auto i : parts.test) which[i] = "test";
  for (std::size_t i = 0; i < docs.size(); ++i) splits << docs[i].url << '\t' << which[i] << '\n';

  // ranked lists over random documents; graded relevance leans on quality
  std::mt19937_64 rng(mix_seed(seed, 0x6c69737473ULL));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const std::size_t k = std::min(layout.results_per_query, docs.size());
  for (std::size_t q = 0; q < layout.num_queries && k > 0; ++q) {
    std::vector<std::size_t> pool(docs.size());
    std::iota(pool.begin(), pool.end(), 0);
    std::shuffle(pool.begin(), pool.end(), rng);
    std::vector<std::pair<double, std::size_t>> picked;
    for (std::size_t r = 0; r < k; ++r) picked.emplace_back(std::round(unit(rng) * 1000.0) / 1000.0, pool[r]);
    std::stable_sort(picked.begin(), picked.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
    json results = json::array();
    for (const auto& [relevance, doc] : picked) {
      const double raw = 1.5 * relevance + 2.0 * docs[doc].label + unit(rng);
      const int grade = std::clamp(static_cast<int>(std::floor(raw)), 0, 4);
      results.push_back({{"url", docs[doc].url}, {"relevance", relevance}, {"rel_grade", grade}});
    }
    lists << json{{"query", "q" + std::to_string(q)}, {"results", std::move(results)}}.dump() << '\n';
  }

  write_file(out / "index.tsv", index.str());
  write_file(out / "labels.tsv", labels.str());
  write_file(out / "splits.tsv", splits.str());
  write_file(out / "manifest.jsonl", manifest.str());
  write_file(out / "lists.jsonl", lists.str());
}

}  // namespace layoutrank::synth
