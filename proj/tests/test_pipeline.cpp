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

#include <json.hpp>
#include <unistd.h>

#include "layoutrank/errors.hpp"
#include "layoutrank/metrics.hpp"
#include "layoutrank/pipeline.hpp"
#include "layoutrank/synth.hpp"
#include "layoutrank/util.hpp"
#include "oracles.hpp"

using namespace layoutrank;
using namespace layoutrank::pipeline;

namespace {

std::filesystem::path temp_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / (name + "_" + std::to_string(::getpid()));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

std::vector<RankedList> random_lists(oracle::Rng& rng, std::size_t n) {
  std::vector<RankedList> lists;
  for (std::size_t q = 0; q < n; ++q) {
    RankedList l{"q" + std::to_string(q), {}};
    const std::size_t len = 1 + oracle::pick(rng, 10);
    for (std::size_t i = 0; i < len; ++i) {
      l.results.push_back({"u" + std::to_string(oracle::pick(rng, 30)), std::round(oracle::uniform(rng, 0, 1) * 4) / 4,
                           static_cast<int>(oracle::pick(rng, 5))});
    }
    lists.push_back(std::move(l));
  }
  return lists;
}

}  // namespace

TEST_CASE("score store") {
  SUBCASE("empty store has a valid header") {
    ScoreStore s("abc", "def", {});
    const auto text = s.serialize();
    CHECK(text.starts_with("#layoutrank-score-store\tv1\tschema=abc\tmodel=def"));
    CHECK(ScoreStore::parse(text).size() == 0);
  }
  SUBCASE("sorted, exact round trip and lookup") {
    ScoreStore s("h", "m", {{"b", 0.1 + 0.2, "m"}, {"a", 1.0 / 3.0, "m"}, {"c", 0.0, "m"}});
    CHECK(s.entries()[0].url == "a");
    auto back = ScoreStore::parse(s.serialize());
    CHECK(back.entries() == s.entries());
    CHECK(back.serialize() == s.serialize());
    CHECK(back.lookup("b") == 0.1 + 0.2);
    CHECK(back.lookup("zz") == std::nullopt);
  }
  SUBCASE("invalid contents") {
    CHECK_THROWS_AS(ScoreStore("h", "m", {{"a", 0.5, "m"}, {"a", 0.6, "m"}}), DataError);
    CHECK_THROWS_AS(ScoreStore("h", "m", {{"a", 1.5, "m"}}), DataError);
    CHECK_THROWS_AS(ScoreStore::parse("#something-else\tv1\n"), VersionError);
    CHECK_THROWS_AS(ScoreStore::parse("#layoutrank-score-store\tv9\tschema=a\tmodel=b\n"), VersionError);
  }
}

TEST_CASE("rerank with w = 0 is the identity") {
  oracle::Rng rng(1);
  for (int t = 0; t < 50; ++t) {
    auto lists = random_lists(rng, 1 + oracle::pick(rng, 5));
    std::map<std::string, double> q;
    for (int i = 0; i < 30; ++i) {
      if (rng() % 4) q["u" + std::to_string(i)] = oracle::uniform(rng, 0, 1);
    }
    auto out = rerank_sim(lists, [&](std::string_view u) -> std::optional<double> {
      auto it = q.find(std::string(u));
      return it == q.end() ? std::nullopt : std::optional<double>(it->second);
    }, 0.0);
    CHECK(out.lists == lists);
    CHECK(out.report.changes.empty());
    CHECK(out.report.mean_delta() == 0.0);
  }
}

TEST_CASE("rerank swap case") {
  std::vector<RankedList> lists = {{"q", {{"low", 0.7, 1}, {"high", 0.7, 3}}}};
  std::map<std::string, double> q = {{"low", 0.2415}, {"high", 0.5623}};
  auto lookup = [&](std::string_view u) -> std::optional<double> { return q.at(std::string(u)); };
  auto out = rerank_sim(lists, lookup, 1.0);
  CHECK(out.lists[0].results[0].url == "high");
  CHECK(out.report.changes.size() == 2);
  CHECK(out.report.dcg_after[0] > out.report.dcg_before[0]);
  auto mid = rerank_sim(lists, lookup, 0.5);
  CHECK(mid.lists[0].results[0].url == "high");
  CHECK_THROWS_AS(rerank_sim(lists, lookup, 1.5), BadWeight);
  CHECK_THROWS_AS(rerank_sim(lists, lookup, -0.1), BadWeight);
}

TEST_CASE("rerank blends relevance and quality by hand") {
  oracle::Rng rng(2);
  auto lists = random_lists(rng, 20);
  std::map<std::string, double> q;
  for (int i = 0; i < 30; ++i) q["u" + std::to_string(i)] = oracle::uniform(rng, 0, 1);
  const double w = 0.3;
  auto out = rerank_sim(lists, [&](std::string_view u) -> std::optional<double> { return q.at(std::string(u)); }, w);
  for (std::size_t l = 0; l < lists.size(); ++l) {
    std::vector<std::pair<double, std::size_t>> keyed;
    for (std::size_t i = 0; i < lists[l].results.size(); ++i) {
      const auto& r = lists[l].results[i];
      keyed.push_back({-((1 - w) * r.relevance + w * q.at(r.url)), i});
    }
    std::sort(keyed.begin(), keyed.end());
    for (std::size_t pos = 0; pos < keyed.size(); ++pos) CHECK(out.lists[l].results[pos] == lists[l].results[keyed[pos].second]);
  }
  auto missing = rerank_sim(lists, [](std::string_view) -> std::optional<double> { return std::nullopt; }, w);
  CHECK_FALSE(missing.report.warnings.empty());
  CHECK(parse_lists(lists_to_jsonl(lists)) == lists);
}

TEST_CASE("report deltas") {
  auto report = [](double auc) {
    nlohmann::json j = {{"pnr", 2.0},
                        {"auc", auc},
                        {"label_1", {{"precision", 0.5}, {"recall", 0.5}, {"f1", 0.5}}},
                        {"label_0", {{"precision", 0.5}, {"recall", 0.5}, {"f1", 0.5}}}};
    return j.dump();
  };
  for (const auto& r : compare_reports(report(0.7), report(0.7))) CHECK(r.delta == 0.0);
  auto rows = compare_reports(report(0.75), report(0.70));
  const auto text = render_deltas(rows);
  CHECK(text.find("+5.00%") != std::string::npos);
  auto with_dcg = nlohmann::json::parse(report(0.7));
  with_dcg["dcg"] = {{"p", 4}, {"mean", 3.0}};
  CHECK_THROWS_AS(compare_reports(with_dcg.dump(), report(0.7)), MetricMismatch);
  CHECK(nlohmann::json::parse(deltas_to_json(rows)).size() == rows.size());
}

TEST_CASE("corpus file readers reject malformed rows") {
  const auto dir = temp_dir("lr_io");
  write_file(dir / "labels.tsv", "#url\tlabel\na\t1\nb\t2\n");
  CHECK_THROWS_AS(read_labels(dir / "labels.tsv"), DataError);
  write_file(dir / "labels.tsv", "a\t1\na\t0\n");
  CHECK_THROWS_AS(read_labels(dir / "labels.tsv"), DataError);
  write_file(dir / "index.tsv", "u\tc\n");
  CHECK_THROWS_AS(read_index(dir / "index.tsv"), DataError);
  write_file(dir / "index.tsv", "u\tc\tpages/a.html\t-\n");
  auto idx = read_index(dir / "index.tsv");
  CHECK(idx[0].html == dir / "pages/a.html");
  CHECK(idx[0].prerendered.empty());
  CHECK_THROWS_AS(read_labels(dir / "nope.tsv"), DataError);
  std::filesystem::remove_all(dir);
}

TEST_CASE("html and pre-rendered inputs score identically and reruns are byte-identical") {
  const auto dir = temp_dir("lr_pipe");
  synth::SynthSpec spec;
  spec.n = 120;
  spec.seed = 8;
  const auto docs = synth::generate(spec);
  synth::CorpusLayout layout;
  layout.emit_prerendered = true;
  synth::write_corpus(dir, docs, layout, 8);
  const auto index = read_index(dir / "index.tsv");
  const auto from_html = ingest_index(index, IngestSource::Html, spec.viewport, 3);
  const auto from_pre = ingest_index(index, IngestSource::Prerendered, spec.viewport, 3);
  CHECK(from_html == from_pre);

  features::FitOptions opt;
  opt.min_count = 5;
  opt.embedding_dim = 8;
  const auto schema = features::fit_buckets(from_html, opt);
  const auto labels = read_labels(dir / "labels.tsv");
  const auto splits = read_splits(dir / "splits.tsv");
  train::TrainConfig cfg;
  cfg.epochs = 2;
  cfg.lr = 3e-3;
  cfg.model.dim = 8;
  cfg.model.layers = 2;
  auto run = [&](const std::vector<graph::LayoutGraph>& graphs) {
    auto tr = make_examples(graphs, schema, labels, splits, "train");
    auto ev = make_examples(graphs, schema, labels, splits, "eval");
    auto result = train::train(tr, ev, schema, cfg);
    return score_batch(graphs, schema, result.checkpoint, 2).serialize();
  };
  const auto a = run(from_html);
  CHECK(a == run(from_html));
  CHECK(a == run(from_pre));
  const auto store = ScoreStore::parse(a);
  CHECK(store.size() == docs.size());
  for (const auto& e : store.entries()) {
    CHECK(e.score >= 0.0);
    CHECK(e.score <= 1.0);
  }
  std::filesystem::remove_all(dir);
}

TEST_CASE("scoring refuses a foreign schema") {
  oracle::Rng rng(3);
  auto fx = oracle::make_fixture(rng, {4, 6}, 8);
  Checkpoint ck;
  ck.config.dim = 8;
  ck.config.layers = 1;
  ck.params = model::ModelParams::init(ck.config, fx.schema, 1);
  ck.schema_hash = "0000000000000000";
  CHECK_THROWS_AS(score_batch(fx.graphs, fx.schema, ck), SchemaMismatch);
}
