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

#include "layoutrank/dom.hpp"
#include "layoutrank/errors.hpp"
#include "layoutrank/style.hpp"
#include "layoutrank/util.hpp"
#include "oracles.hpp"

using namespace layoutrank;
using dom::NodeType;

namespace {

std::size_t find_tag(const dom::DomTree& t, std::string_view tag) {
  for (const auto& n : t.nodes) {
    if (n.tag_name == tag) return n.node_id;
  }
  FAIL("no node " << tag);
  return 0;
}

}  // namespace

TEST_CASE("parse a small document") {
  auto t = dom::parse_html("<html><body><div><p>hi world</p><img/></div></body></html>");
  REQUIRE(t.size() == 5);
  CHECK(t.root().tag_name == "html");
  const auto p = find_tag(t, "p");
  CHECK(t.nodes[p].text_length == 2);
  CHECK(t.nodes[p].node_type == NodeType::Text);
  CHECK(t.nodes[find_tag(t, "img")].node_type == NodeType::Image);
  CHECK(t.nodes[find_tag(t, "div")].children.size() == 2);
  CHECK(t.depth() == 3);
  dom::validate(t);
}

TEST_CASE("parser recovery") {
  SUBCASE("unclosed div") {
    auto t = dom::parse_html("<div>");
    REQUIRE(t.size() == 1);
    CHECK(t.root().tag_name == "div");
  }
  SUBCASE("stray close tags and implied paragraph end") {
    auto t = dom::parse_html("<div></span><p>one<p>two</div></b>");
    CHECK(t.root().tag_name == "div");
    CHECK(t.root().children.size() == 2);
  }
  SUBCASE("uppercase tags, attributes and comments") {
    auto t = dom::parse_html("<DIV Class=x><!-- <p>no</p> --><A HREF='u'>link text</A></DIV>");
    REQUIRE(t.size() == 2);
    CHECK(t.nodes[1].tag_name == "a");
    CHECK(t.nodes[1].node_type == NodeType::Interactive);
    CHECK(t.nodes[1].text_length == 2);
  }
  SUBCASE("script and style bodies are dropped") {
    auto t = dom::parse_html("<div><script>if (a < b) { x(); }</script><style>p{}</style>words here</div>");
    CHECK(t.size() == 1);
    CHECK(t.root().text_length == 2);
  }
  SUBCASE("several top-level elements share a synthetic root") {
    auto t = dom::parse_html("<p>a</p><p>b</p>");
    CHECK(t.root().tag_name == "html");
    CHECK(t.root().children.size() == 2);
  }
  SUBCASE("void elements do not nest") {
    auto t = dom::parse_html("<div><br><img src=x><input><span>s</span></div>");
    CHECK(t.root().children.size() == 4);
  }
  SUBCASE("nothing recoverable") {
    CHECK_THROWS_AS(dom::parse_html(""), EmptyDocument);
    CHECK_THROWS_AS(dom::parse_html("just text"), EmptyDocument);
  }
}

TEST_CASE("inline style overrides the default sheet") {
  auto t = dom::parse_html("<h1 style=\"font-size: 20px; COLOR:red\">x</h1>");
  CHECK(style::lookup(t.root().style, "font-size") == "20px");
  CHECK(style::lookup(t.root().style, "color") == "red");
  CHECK(style::lookup(t.root().style, "display") == "block");
}

TEST_CASE("css helpers") {
  CHECK(style::parse_length("12px", std::nullopt) == 12.0);
  CHECK(style::parse_length("50%", 200.0) == 100.0);
  CHECK(style::parse_length("50%", std::nullopt) == std::nullopt);
  CHECK(style::parse_length("2em", std::nullopt, 10.0) == 20.0);
  CHECK(style::parse_length("auto", 100.0) == std::nullopt);
  CHECK(style::first_length("2px solid red") == 2.0);
  CHECK(style::first_length("none") == 0.0);
  CHECK(style::first_length("thick") == 5.0);
  auto m = style::parse_style_attribute("a: 1; broken; B : 2 ;");
  CHECK(m.size() == 2);
  CHECK(m["b"] == "2");
}

TEST_CASE("line-height units") {
  dom::StyleMap s{{"display", "block"}, {"font-size", "10px"}};
  s["line-height"] = "20px";
  CHECK(style::box_props("div", s, 500).line_height == 20.0);
  s["line-height"] = "1.5";
  CHECK(style::box_props("div", s, 500).line_height == 15.0);
  s["line-height"] = "normal";
  CHECK(style::box_props("div", s, 500).line_height == doctest::Approx(12.0));
}

TEST_CASE("geometry basics") {
  const dom::Viewport vp{1000, 800};
  SUBCASE("single div takes the viewport width") {
    auto t = dom::estimate_geometry(dom::parse_html("<div></div>"), vp);
    CHECK(t.root().geometry.width == 1000);
    CHECK(t.root().geometry.xpos == 0);
    CHECK(t.root().geometry.ypos == 0);
  }
  SUBCASE("sibling blocks stack") {
    auto t = dom::estimate_geometry(
        dom::parse_html("<body><div style='height:100px'></div><div style='height:200px'></div></body>"), vp);
    CHECK(t.nodes[1].geometry.ypos == 0);
    CHECK(t.nodes[2].geometry.ypos == 100);
    CHECK(t.nodes[2].geometry.height == 200);
  }
  SUBCASE("text wraps at the container width") {
    auto t = dom::estimate_geometry(
        dom::parse_html("<body><p style='width:100px;font-size:10px;line-height:10px'>a b c d e f g h</p></body>"), vp);
    // 8 words * 30px = 240px over 100px -> 3 lines
    CHECK(t.nodes[1].geometry.height == 30);
    CHECK(t.root().geometry.height == 800);
  }
  SUBCASE("display none collapses") {
    auto t = dom::estimate_geometry(dom::parse_html("<div><p style='display:none'>x y</p><p>z</p></div>"), vp);
    CHECK(t.nodes[1].geometry.height == 0);
    CHECK(t.nodes[2].geometry.ypos == 0);
  }
  SUBCASE("absolute boxes leave the flow") {
    auto t = dom::estimate_geometry(
        dom::parse_html("<body><div style='position:absolute;top:40px;left:30px;width:50px;height:60px'></div>"
                        "<div style='height:10px'></div></body>"),
        vp);
    CHECK(t.nodes[1].geometry == dom::Geometry{60, 50, 30, 40});
    CHECK(t.nodes[2].geometry.ypos == 0);
  }
}

TEST_CASE("geometry is finite and non-negative on random markup") {
  oracle::Rng rng(5);
  for (int i = 0; i < 50; ++i) {
    auto tree = oracle::random_tree(rng, 1 + oracle::pick(rng, 40));
    auto t = dom::estimate_geometry(tree, {1280, 2000});
    dom::validate(t);
  }
}

TEST_CASE("prerendered round trip") {
  auto t = dom::estimate_geometry(
      dom::parse_html("<html><body><div style='width:300px'><p>hi there</p><img/></div><a href=x>go</a></body></html>",
                      "https://x.test/", "news"),
      {1280, 2000});
  const auto text = dom::export_prerendered(t);
  auto back = dom::parse_prerendered(text);
  CHECK(back == t);
  auto both = dom::parse_prerendered_all(text + text);
  CHECK(both.size() == 2);
  CHECK(both[1] == t);
}

TEST_CASE("prerendered schema errors carry the line") {
  const std::string text =
      "{\"url\":\"u\",\"category\":\"c\"}\n"
      "{\"node_id\":0,\"parent_id\":null,\"tag_name\":\"div\",\"style\":{},"
      "\"geometry\":{\"height\":1,\"width\":1,\"xpos\":0,\"ypos\":0},\"text_length\":0}\n"
      "{\"node_id\":1,\"parent_id\":0,\"style\":{},"
      "\"geometry\":{\"height\":1,\"width\":1,\"xpos\":0,\"ypos\":0},\"text_length\":0}\n";
  try {
    dom::parse_prerendered(text);
    FAIL("expected SchemaError");
  } catch (const SchemaError& e) {
    CHECK(e.line() == 3);
  }
  CHECK_THROWS_AS(dom::parse_prerendered("{\"url\":\"u\"}\n{not json}\n"), SchemaError);
}

TEST_CASE("util") {
  CHECK(count_words("  a  b\tc\n") == 3);
  CHECK(split("a,,b", ',') == std::vector<std::string>{"a", "", "b"});
  CHECK(trim("  x ") == "x");
  CHECK(hex64(fnv1a64("")) == "cbf29ce484222325");
  CHECK(mix_seed(1, 2) != mix_seed(2, 1));
}
