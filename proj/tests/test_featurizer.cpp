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
#include "layoutrank/featurizer.hpp"
#include "oracles.hpp"

using namespace layoutrank;
using namespace layoutrank::features;

namespace {

// Recount of every value into [b[i-1], b[i]) by linear scan.
std::vector<std::size_t> recount(const std::vector<double>& values, const std::vector<double>& b) {
  std::vector<std::size_t> counts(b.size() + 1, 0);
  for (double v : values) {
    std::size_t i = 0;
    while (i < b.size() && v >= b[i]) ++i;
    ++counts[i];
  }
  return counts;
}

const BucketSpec& bucket_spec(const FeatureSchema& s, std::string_view name) {
  for (const auto& f : s.features) {
    if (f.name == name) return std::get<BucketSpec>(f.spec);
  }
  FAIL("no feature " << name);
  throw;
}

const FeatureVocab& vocab(const FeatureSchema& s, std::string_view name) {
  for (const auto& f : s.features) {
    if (f.name == name) return std::get<FeatureVocab>(f.spec);
  }
  FAIL("no feature " << name);
  throw;
}

}  // namespace

TEST_CASE("uniform values give equal buckets") {
  std::vector<double> v;
  for (int i = 1; i <= 1000; ++i) v.push_back(i);
  auto b = fit_bucket_boundaries("x", v, 100, 10);
  CHECK(b.num_buckets() == 10);
  for (auto c : recount(v, b.boundaries)) CHECK(c == 100);
  CHECK(recount(v, b.boundaries) == b.occupancy);
  CHECK(b.boundaries.front() == 101);
}

TEST_CASE("constant feature gets a single cut") {
  auto b = fit_bucket_boundaries("x", std::vector<double>(50, 7.0), 10, 16);
  CHECK(b.boundaries == std::vector<double>{7.0});
  CHECK(b.num_buckets() == 2);
  CHECK(b.bucket(7.0) == 1);
  CHECK(b.bucket(6.0) == 0);
}

TEST_CASE("long tail: zeros get their own bucket") {
  std::vector<double> v(900, 0.0);
  for (int i = 1; i <= 100; ++i) v.push_back(i);
  auto b = fit_bucket_boundaries("x", v, 20, 10);
  REQUIRE_FALSE(b.boundaries.empty());
  CHECK(b.boundaries.front() > 0.0);
  const auto counts = recount(v, b.boundaries);
  CHECK(counts.front() == 900);
  for (auto c : counts) CHECK(c >= 20);
  CHECK(counts.size() >= 3);
}

TEST_CASE("random inputs: every bucket meets min_count and ties stay together") {
  oracle::Rng rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> v;
    const std::size_t n = 50 + oracle::pick(rng, 500);
    for (std::size_t i = 0; i < n; ++i) v.push_back(std::round(oracle::uniform(rng, 0, 40)) * (rng() % 4 == 0 ? 0 : 1));
    const std::size_t min_count = 1 + oracle::pick(rng, 60);
    auto b = fit_bucket_boundaries("x", v, min_count, 1 + oracle::pick(rng, 20));
    const auto counts = recount(v, b.boundaries);
    CHECK(counts == b.occupancy);
    CHECK(std::is_sorted(b.boundaries.begin(), b.boundaries.end()));
    CHECK(std::adjacent_find(b.boundaries.begin(), b.boundaries.end()) == b.boundaries.end());
    if (n >= 2 * min_count && b.boundaries.size() > 1) {
      for (auto c : counts) CHECK(c >= min_count);
    }
  }
}

TEST_CASE("bucket lookup") {
  BucketSpec b{"height", {10, 100}, {}};
  CHECK(b.bucket(0) == 0);
  CHECK(b.bucket(10) == 1);
  CHECK(b.bucket(99.9) == 1);
  CHECK(b.bucket(1e9) == 2);
  CHECK(b.missing_index() == 3);
  CHECK(b.table_size() == 4);
}

TEST_CASE("schema fit, encoding and round trip") {
  oracle::Rng rng(3);
  std::vector<graph::LayoutGraph> corpus;
  for (int i = 0; i < 20; ++i) corpus.push_back(graph::build_layout_graph(oracle::random_tree(rng, 20)));
  FitOptions opt;
  opt.min_count = 5;
  auto schema = fit_buckets(corpus, opt);
  CHECK(schema.features.size() == graph::node_feature_defs().size());
  CHECK(schema.category_vocab.tokens.size() >= 1);

  SUBCASE("unseen tag is OOV and absent values are MISSING") {
    graph::RawFeatureMap raw{{"tag_name", std::string("blink")}};
    const auto idx = encode_node(raw, dom::NodeType::Other, schema);
    for (std::size_t f = 0; f < schema.features.size(); ++f) {
      const auto& e = schema.features[f];
      if (e.name == "tag_name") {
        CHECK(idx[f] == FeatureVocab::kOov);
      } else if (e.name != "node_type") {
        CHECK(idx[f] == e.table_size() - 1);
      }
      CHECK(idx[f] < e.table_size());
    }
    CHECK(encode_category("never-seen", schema) == FeatureVocab::kOov);
  }
  SUBCASE("encoding follows boundaries and vocab by hand") {
    const auto& g = corpus[0];
    auto enc = encode_graph(g, schema);
    CHECK(enc.num_nodes == g.num_nodes);
    CHECK(enc.edges == g.edges);
    for (std::size_t n = 1; n < g.num_nodes; ++n) {
      const auto& raw = g.raw_features[n];
      const auto& row = enc.node_indices[n - 1];
      for (std::size_t f = 0; f < schema.features.size(); ++f) {
        const auto& e = schema.features[f];
        if (e.name == "node_type") continue;
        auto it = raw.find(e.name);
        std::size_t want;
        if (it == raw.end()) {
          want = e.table_size() - 1;
        } else if (e.kind == graph::FeatureKind::Continuous) {
          const auto& b = bucket_spec(schema, e.name).boundaries;
          want = 0;
          while (want < b.size() && std::get<double>(it->second) >= b[want]) ++want;
        } else {
          const auto& toks = vocab(schema, e.name).tokens;
          auto t = std::find(toks.begin(), toks.end(), std::get<std::string>(it->second));
          want = t == toks.end() ? 0 : static_cast<std::size_t>(t - toks.begin()) + 1;
        }
        CHECK(row[f] == want);
      }
    }
  }
  SUBCASE("json round trip preserves the hash") {
    auto back = FeatureSchema::from_json(schema.to_json());
    CHECK(back.to_json() == schema.to_json());
    CHECK(back.hash() == schema.hash());
  }
  CHECK_THROWS_AS(fit_buckets(std::span<const graph::LayoutGraph>(), opt), EmptyCorpus);
}

TEST_CASE("initial embedding is the sum of looked-up rows") {
  std::vector<tensor::Tensor> tables = {tensor::Tensor(3, 2, {1, 2, 3, 4, 5, 6}), tensor::Tensor(2, 2, {10, 20, 30, 40}),
                                        tensor::Tensor(4, 2, {0.5, 0.5, 1, 1, 2, 2, 3, 3})};
  std::vector<std::size_t> idx = {2, 0, 3};
  CHECK(init_node_embedding(idx, tables) == std::vector<double>{5 + 10 + 3, 6 + 20 + 3});
  std::vector<std::size_t> one = {1};
  CHECK(init_node_embedding(one, std::span(tables).first(1)) == std::vector<double>{3, 4});
  std::vector<tensor::Tensor> zeros = {tensor::Tensor(3, 2)};
  CHECK(init_node_embedding(one, zeros) == std::vector<double>{0, 0});
}
