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
#include <cmath>
#include <json.hpp>
#include <numeric>

#include "layoutrank/errors.hpp"
#include "layoutrank/metrics.hpp"
#include "layoutrank/pipeline.hpp"
#include "layoutrank/util.hpp"

namespace layoutrank::pipeline {

using nlohmann::json;

std::vector<RankedList> parse_lists(std::string_view jsonl) {
  std::vector<RankedList> lists;
  std::size_t line_no = 0;
  for (const auto& line : split(jsonl, '\n')) {
    ++line_no;
    if (trim(line).empty()) continue;
    try {
      auto j = json::parse(line);
      RankedList list;
      list.query = j.at("query").get<std::string>();
      for (const auto& r : j.at("results")) {
        RankedResult res;
        res.url = r.at("url").get<std::string>();
        res.relevance = r.at("relevance").get<double>();
        res.rel_grade = r.value("rel_grade", 0);
        if (res.rel_grade < 0 || res.rel_grade > 4) throw DataError("rel_grade outside 0..4");
        list.results.push_back(std::move(res));
      }
      lists.push_back(std::move(list));
    } catch (const json::exception& e) {
      throw DataError("ranked lists line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return lists;
}

std::string lists_to_jsonl(const std::vector<RankedList>& lists) {
  std::string out;
  for (const auto& l : lists) {
    json results = json::array();
    for (const auto& r : l.results) {
      results.push_back({{"url", r.url}, {"relevance", r.relevance}, {"rel_grade", r.rel_grade}});
    }
    out += json{{"query", l.query}, {"results", std::move(results)}}.dump() + "\n";
  }
  return out;
}

namespace {

double list_dcg(const RankedList& list) {
  std::vector<int> rels;
  for (const auto& r : list.results) rels.push_back(r.rel_grade);
  return metrics::dcg(rels, std::min<std::size_t>(4, rels.size()), list.query);
}

}  // namespace

RerankOutput rerank_sim(const std::vector<RankedList>& lists, const QualityLookup& quality, double weight) {
  if (!(weight >= 0.0 && weight <= 1.0)) throw BadWeight("blend weight " + std::to_string(weight));
  RerankOutput out;
  out.report.weight = weight;
  for (const auto& list : lists) {
    std::vector<double> q(list.results.size(), 0.5);
    for (std::size_t i = 0; i < list.results.size(); ++i) {
      if (auto s = quality(list.results[i].url)) {
        q[i] = *s;
      } else {
        out.report.warnings.push_back("no quality score for " + list.results[i].url + "; using 0.5");
      }
    }
    std::vector<std::size_t> order(list.results.size());
    std::iota(order.begin(), order.end(), 0);
    if (weight > 0.0) {
      std::vector<double> key(order.size());
      for (std::size_t i = 0; i < key.size(); ++i) key[i] = (1.0 - weight) * list.results[i].relevance + weight * q[i];
      std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return key[a] > key[b]; });
    }
    RankedList reranked;
    reranked.query = list.query;
    for (std::size_t pos = 0; pos < order.size(); ++pos) {
      reranked.results.push_back(list.results[order[pos]]);
      if (order[pos] != pos) {
        out.report.changes.push_back({list.query, list.results[order[pos]].url, order[pos] + 1, pos + 1, q[order[pos]]});
      }
    }
    if (!list.results.empty()) {
      out.report.queries.push_back(list.query);
      out.report.dcg_before.push_back(list_dcg(list));
      out.report.dcg_after.push_back(list_dcg(reranked));
    }
    out.lists.push_back(std::move(reranked));
  }
  auto mean = [](const std::vector<double>& v) {
    return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  };
  out.report.mean_before = mean(out.report.dcg_before);
  out.report.mean_after = mean(out.report.dcg_after);
  return out;
}

std::string RerankReport::to_json() const {
  json per_query = json::array();
  for (std::size_t i = 0; i < queries.size(); ++i) {
    per_query.push_back({{"query", queries[i]}, {"dcg_before", dcg_before[i]}, {"dcg_after", dcg_after[i]}});
  }
  json moves = json::array();
  for (const auto& c : changes) {
    moves.push_back({{"query", c.query}, {"url", c.url}, {"before", c.before}, {"after", c.after}, {"quality", c.quality}});
  }
  json j;
  j["weight"] = weight;
  j["mean_dcg_before"] = mean_before;
  j["mean_dcg_after"] = mean_after;
  j["mean_dcg_delta"] = mean_delta();
  j["per_query"] = std::move(per_query);
  j["position_changes"] = std::move(moves);
  j["warnings"] = warnings;
  return j.dump(2);
}

}  // namespace layoutrank::pipeline
