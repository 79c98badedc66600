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

#include <algorithm>
#include <atomic>
#include <mutex>
#include <thread>

#include "layoutrank/errors.hpp"
#include "layoutrank/pipeline.hpp"
#include "layoutrank/util.hpp"

namespace layoutrank::pipeline {

namespace {

// Non-comment, non-empty lines split on tabs, with their 1-based numbers.
std::vector<std::pair<std::size_t, std::vector<std::string>>> read_tsv(const std::filesystem::path& path) {
  std::vector<std::pair<std::size_t, std::vector<std::string>>> rows;
  const auto text = read_file(path);
  std::size_t line_no = 0;
  for (auto& line : split(text, '\n')) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    rows.emplace_back(line_no, split(line, '\t'));
  }
  return rows;
}

template <typename Fn>
void parallel_for(std::size_t n, std::size_t threads, Fn fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, std::max<std::size_t>(n, 1));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex mu;
  auto worker = [&] {
    try {
      for (std::size_t i = next++; i < n; i = next++) fn(i);
    } catch (...) {
      std::lock_guard lock(mu);
      if (!failure) failure = std::current_exception();
      next = n;
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace

std::vector<IndexEntry> read_index(const std::filesystem::path& path) {
  const auto base = path.parent_path();
  std::vector<IndexEntry> out;
  for (const auto& [line, cols] : read_tsv(path)) {
    if (cols.size() < 3) throw DataError(path.string() + ":" + std::to_string(line) + ": expected url, category, html");
    IndexEntry e;
    e.url = cols[0];
    e.category = cols[1];
    if (cols[2] != "-") e.html = base / cols[2];
    if (cols.size() > 3 && cols[3] != "-") e.prerendered = base / cols[3];
    out.push_back(std::move(e));
  }
  return out;
}

std::map<std::string, int> read_labels(const std::filesystem::path& path) {
  std::map<std::string, int> out;
  for (const auto& [line, cols] : read_tsv(path)) {
    if (cols.size() != 2 || (cols[1] != "0" && cols[1] != "1")) {
      throw DataError(path.string() + ":" + std::to_string(line) + ": expected url and a 0/1 label");
    }
    if (!out.emplace(cols[0], cols[1] == "1" ? 1 : 0).second) {
      throw DataError(path.string() + ":" + std::to_string(line) + ": duplicate url " + cols[0]);
    }
  }
  return out;
}

std::map<std::string, std::string> read_splits(const std::filesystem::path& path) {
  std::map<std::string, std::string> out;
  for (const auto& [line, cols] : read_tsv(path)) {
    if (cols.size() != 2) throw DataError(path.string() + ":" + std::to_string(line) + ": expected url and split");
    out[cols[0]] = cols[1];
  }
  return out;
}

graph::LayoutGraph ingest_html(std::string_view html, const std::string& url, const std::string& category,
                               const dom::Viewport& viewport) {
  auto tree = dom::estimate_geometry(dom::parse_html(html, url, category), viewport);
  return graph::build_layout_graph(tree);
}

std::vector<graph::LayoutGraph> ingest_index(const std::vector<IndexEntry>& index, IngestSource source,
                                             const dom::Viewport& viewport, std::size_t threads) {
  std::vector<graph::LayoutGraph> out(index.size());
  parallel_for(index.size(), threads, [&](std::size_t i) {
    const auto& e = index[i];
    if (source == IngestSource::Html) {
      if (e.html.empty()) throw DataError("no html file for " + e.url);
      out[i] = ingest_html(read_file(e.html), e.url, e.category, viewport);
    } else {
      if (e.prerendered.empty()) throw DataError("no pre-rendered file for " + e.url);
      auto tree = dom::load_prerendered(e.prerendered);
      tree.source_url = e.url;
      tree.category = e.category;
      out[i] = graph::build_layout_graph(tree);
    }
  });
  return out;
}

std::vector<train::LabeledExample> make_examples(const std::vector<graph::LayoutGraph>& graphs,
                                                 const features::FeatureSchema& schema,
                                                 const std::map<std::string, int>& labels,
                                                 const std::map<std::string, std::string>& splits,
                                                 const std::string& split_name) {
  std::vector<train::LabeledExample> out;
  for (const auto& g : graphs) {
    auto label = labels.find(g.url);
    if (label == labels.end()) continue;
    if (!split_name.empty()) {
      auto s = splits.find(g.url);
      if (s == splits.end() || s->second != split_name) continue;
    }
    train::LabeledExample ex;
    ex.graph = std::make_shared<const features::EncodedGraph>(features::encode_graph(g, schema));
    ex.label = label->second;
    ex.category = g.category;
    out.push_back(std::move(ex));
  }
  return out;
}

ScoreStore score_batch(const std::vector<graph::LayoutGraph>& graphs, const features::FeatureSchema& schema,
                       const Checkpoint& checkpoint, std::size_t threads) {
  checkpoint.require_schema(schema);
  std::vector<features::EncodedGraph> encoded(graphs.size());
  parallel_for(graphs.size(), threads, [&](std::size_t i) { encoded[i] = features::encode_graph(graphs[i], schema); });
  std::vector<const features::EncodedGraph*> ptrs;
  for (const auto& e : encoded) ptrs.push_back(&e);
  const auto scores = train::score_all(ptrs, checkpoint.params, checkpoint.config, threads);
  const auto version = checkpoint.hash();
  std::vector<ScoreEntry> entries;
  for (std::size_t i = 0; i < graphs.size(); ++i) entries.push_back({graphs[i].url, scores[i], version});
  return ScoreStore(schema.hash(), version, std::move(entries));
}

}  // namespace layoutrank::pipeline
