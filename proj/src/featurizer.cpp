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

#include "layoutrank/featurizer.hpp"

#include <algorithm>
#include <cassert>
#include <charconv>
#include <cmath>
#include <json.hpp>

#include "layoutrank/errors.hpp"
#include "layoutrank/util.hpp"

namespace layoutrank::features {

using graph::FeatureKind;
using nlohmann::json;

std::size_t BucketSpec::bucket(double value) const {
  return static_cast<std::size_t>(std::upper_bound(boundaries.begin(), boundaries.end(), value) -
                                  boundaries.begin());
}

std::size_t FeatureVocab::lookup(const std::string& token) const {
  // tokens are kept sorted
  auto it = std::lower_bound(tokens.begin(), tokens.end(), token);
  if (it == tokens.end() || *it != token) return kOov;
  return static_cast<std::size_t>(it - tokens.begin()) + 1;
}

std::size_t FeatureEntry::table_size() const {
  return std::visit([](const auto& s) { return s.table_size(); }, spec);
}

BucketSpec fit_bucket_boundaries(std::string name, std::vector<double> values,
                                 std::size_t min_count, std::size_t num_quantiles) {
  BucketSpec spec;
  spec.feature_name = std::move(name);
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  min_count = std::max<std::size_t>(min_count, 1);
  num_quantiles = std::max<std::size_t>(num_quantiles, 2);

  std::size_t start = 0;
  std::size_t buckets_left = num_quantiles;
  while (start < n) {
    const std::size_t remaining = n - start;
    const std::size_t target =
        std::max(min_count, (remaining + buckets_left - 1) / buckets_left);
    std::size_t end = start + target;
    if (end >= n) break;
    while (end < n && values[end] == values[end - 1]) ++end;  // never split ties
    if (end >= n || n - end < min_count) break;  // short tail merges into this bucket
    spec.boundaries.push_back(values[end]);
    start = end;
    buckets_left = std::max<std::size_t>(buckets_left - 1, 1);
  }
  if (spec.boundaries.empty()) {
    // constant or too-small feature: one cut at the minimum, all mass above it
    spec.boundaries.push_back(n > 0 ? values.front() : 0.0);
  }
  spec.occupancy.assign(spec.num_buckets(), 0);
  for (double v : values) ++spec.occupancy[spec.bucket(v)];
  return spec;
}

namespace {

FeatureVocab fit_vocab(std::string name, const std::map<std::string, std::size_t>& counts,
                       std::size_t min_count) {
  FeatureVocab vocab;
  vocab.feature_name = std::move(name);
  std::size_t oov = 0;
  for (const auto& [token, count] : counts) {
    if (count >= min_count) {
      vocab.tokens.push_back(token);
      vocab.occupancy.push_back(count);
    } else {
      oov += count;
    }
  }
  vocab.occupancy.insert(vocab.occupancy.begin(), oov);
  return vocab;
}

std::optional<double> as_number(const graph::RawValue& v) {
  if (const auto* d = std::get_if<double>(&v)) {
    return std::isfinite(*d) ? std::optional<double>(*d) : std::nullopt;
  }
  const auto& s = std::get<std::string>(v);
  double out = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(out)) return std::nullopt;
  return out;
}

std::string as_token(const graph::RawValue& v) {
  if (const auto* s = std::get_if<std::string>(&v)) return *s;
  json j = std::get<double>(v);
  return j.dump();
}

}  // namespace

FeatureSchema fit_buckets(std::span<const graph::LayoutGraph> corpus, const FitOptions& options) {
  if (corpus.empty()) throw EmptyCorpus("no graphs to fit buckets on");
  const auto& defs = graph::node_feature_defs();
  std::vector<std::vector<double>> numeric(defs.size());
  std::vector<std::map<std::string, std::size_t>> tokens(defs.size());
  std::map<std::string, std::size_t> categories;

  for (const auto& g : corpus) {
    ++categories[g.category];
    for (std::size_t n = 1; n < g.num_nodes; ++n) {
      const auto& raw = g.raw_features[n];
      for (std::size_t f = 0; f < defs.size(); ++f) {
        auto it = raw.find(defs[f].name);
        if (it == raw.end()) continue;
        if (defs[f].kind == FeatureKind::Continuous) {
          if (auto x = as_number(it->second)) numeric[f].push_back(*x);
        } else {
          ++tokens[f][as_token(it->second)];
        }
      }
    }
  }

  FeatureSchema schema;
  schema.embedding_dim = options.embedding_dim;
  schema.min_count = options.min_count;
  for (std::size_t f = 0; f < defs.size(); ++f) {
    FeatureEntry entry{defs[f].name, defs[f].kind, BucketSpec{}};
    if (defs[f].kind == FeatureKind::Continuous) {
      entry.spec = fit_bucket_boundaries(defs[f].name, std::move(numeric[f]), options.min_count,
                                         options.num_quantiles);
    } else {
      entry.spec = fit_vocab(defs[f].name, tokens[f], options.min_count);
    }
    schema.features.push_back(std::move(entry));
  }
  schema.category_vocab = fit_vocab("category", categories, 1);
  return schema;
}

std::vector<std::size_t> encode_node(const graph::RawFeatureMap& raw, dom::NodeType node_type,
                                     const FeatureSchema& schema) {
  std::vector<std::size_t> out;
  out.reserve(schema.features.size());
  for (const auto& entry : schema.features) {
    std::optional<graph::RawValue> value;
    if (entry.name == "node_type") {
      value = std::string(dom::to_string(node_type));
    } else if (auto it = raw.find(entry.name); it != raw.end()) {
      value = it->second;
    }
    if (const auto* buckets = std::get_if<BucketSpec>(&entry.spec)) {
      auto x = value ? as_number(*value) : std::nullopt;
      out.push_back(x ? buckets->bucket(*x) : buckets->missing_index());
    } else {
      const auto& vocab = std::get<FeatureVocab>(entry.spec);
      out.push_back(value ? vocab.lookup(as_token(*value)) : vocab.missing_index());
    }
  }
  return out;
}

std::size_t encode_category(const std::string& category, const FeatureSchema& schema) {
  return schema.category_vocab.lookup(category);
}

EncodedGraph encode_graph(const graph::LayoutGraph& g, const FeatureSchema& schema) {
  EncodedGraph e;
  e.num_nodes = g.num_nodes;
  e.edges = g.edges;
  e.url = g.url;
  e.category = encode_category(g.category, schema);
  e.node_indices.reserve(g.num_nodes > 0 ? g.num_nodes - 1 : 0);
  for (std::size_t n = 1; n < g.num_nodes; ++n) {
    e.node_indices.push_back(encode_node(g.raw_features[n], g.node_types[n], schema));
  }
  return e;
}

std::vector<double> init_node_embedding(std::span<const std::size_t> indices,
                                        std::span<const tensor::Tensor> tables) {
  assert(indices.size() == tables.size());
  const std::size_t d = tables.empty() ? 0 : tables.front().cols();
  std::vector<double> h(d, 0.0);
  for (std::size_t f = 0; f < indices.size(); ++f) {
    assert(indices[f] < tables[f].rows());
    auto row = tables[f].row(indices[f]);
    for (std::size_t j = 0; j < d; ++j) h[j] += row[j];
  }
  return h;
}

std::string FeatureSchema::to_json() const {
  json j;
  j["format"] = "layoutrank-schema";
  j["version"] = kVersion;
  j["embedding_dim"] = embedding_dim;
  j["min_count"] = min_count;
  json feats = json::array();
  for (const auto& entry : features) {
    json f;
    f["name"] = entry.name;
    if (const auto* b = std::get_if<BucketSpec>(&entry.spec)) {
      f["kind"] = "continuous";
      f["boundaries"] = b->boundaries;
      f["occupancy"] = b->occupancy;
    } else {
      const auto& v = std::get<FeatureVocab>(entry.spec);
      f["kind"] = "discrete";
      f["tokens"] = v.tokens;
      f["occupancy"] = v.occupancy;
    }
    feats.push_back(std::move(f));
  }
  j["features"] = std::move(feats);
  j["category_vocab"] = {{"tokens", category_vocab.tokens}, {"occupancy", category_vocab.occupancy}};
  return j.dump(1);
}

FeatureSchema FeatureSchema::from_json(std::string_view text) {
  FeatureSchema schema;
  try {
    auto j = json::parse(text);
    if (j.at("format") != "layoutrank-schema") throw VersionError("not a layoutrank schema file");
    if (j.at("version").get<int>() != kVersion) {
      throw VersionError("schema version " + j.at("version").dump() + " is not supported");
    }
    schema.embedding_dim = j.at("embedding_dim").get<std::size_t>();
    schema.min_count = j.at("min_count").get<std::size_t>();
    for (const auto& f : j.at("features")) {
      FeatureEntry entry;
      entry.name = f.at("name").get<std::string>();
      if (f.at("kind") == "continuous") {
        entry.kind = FeatureKind::Continuous;
        BucketSpec b;
        b.feature_name = entry.name;
        b.boundaries = f.at("boundaries").get<std::vector<double>>();
        b.occupancy = f.at("occupancy").get<std::vector<std::size_t>>();
        if (b.boundaries.empty() || !std::is_sorted(b.boundaries.begin(), b.boundaries.end()) ||
            std::adjacent_find(b.boundaries.begin(), b.boundaries.end()) != b.boundaries.end()) {
          throw DataError("feature " + entry.name + ": boundaries must be strictly increasing");
        }
        entry.spec = std::move(b);
      } else {
        entry.kind = FeatureKind::Discrete;
        FeatureVocab v;
        v.feature_name = entry.name;
        v.tokens = f.at("tokens").get<std::vector<std::string>>();
        v.occupancy = f.at("occupancy").get<std::vector<std::size_t>>();
        if (!std::is_sorted(v.tokens.begin(), v.tokens.end())) {
          throw DataError("feature " + entry.name + ": tokens must be sorted");
        }
        entry.spec = std::move(v);
      }
      schema.features.push_back(std::move(entry));
    }
    const auto& c = j.at("category_vocab");
    schema.category_vocab.feature_name = "category";
    schema.category_vocab.tokens = c.at("tokens").get<std::vector<std::string>>();
    schema.category_vocab.occupancy = c.at("occupancy").get<std::vector<std::size_t>>();
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed schema: ") + e.what());
  }
  return schema;
}

std::string FeatureSchema::hash() const { return hex64(fnv1a64(to_json())); }

void FeatureSchema::save(const std::filesystem::path& path) const { write_file(path, to_json() + "\n"); }

FeatureSchema FeatureSchema::load(const std::filesystem::path& path) {
  return from_json(read_file(path));
}

}  // namespace layoutrank::features
