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

#include <cmath>
#include <cstdio>
#include <json.hpp>
#include <limits>
#include <map>

#include "layoutrank/errors.hpp"
#include "layoutrank/pipeline.hpp"

namespace layoutrank::pipeline {

using nlohmann::json;

namespace {

struct MetricValue {
  double value;
  bool percent_points;
};

double as_number(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    return std::numeric_limits<double>::quiet_NaN();
  }
  throw DataError("metric value is not a number");
}

// Flattened metric set of an evaluation report, in a fixed order.
std::vector<std::pair<std::string, MetricValue>> flatten(std::string_view text) {
  std::vector<std::pair<std::string, MetricValue>> out;
  try {
    auto j = json::parse(text);
    if (j.contains("pnr")) out.push_back({"PNR", {as_number(j["pnr"]), false}});
    if (j.contains("auc")) out.push_back({"AUC", {as_number(j["auc"]), true}});
    for (const char* label : {"label_1", "label_0"}) {
      if (!j.contains(label)) continue;
      const auto& m = j[label];
      const std::string suffix = std::string("(") + label[6] + ")";
      out.push_back({"P" + suffix, {as_number(m.at("precision")), true}});
      out.push_back({"R" + suffix, {as_number(m.at("recall")), true}});
      out.push_back({"F1" + suffix, {as_number(m.at("f1")), true}});
    }
    if (j.contains("dcg")) out.push_back({"DCG@" + j["dcg"].at("p").dump(), {as_number(j["dcg"].at("mean")), false}});
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed evaluation report: ") + e.what());
  }
  return out;
}

std::string format_value(double v, bool percent) {
  char buf[48];
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (percent) {
    std::snprintf(buf, sizeof buf, "%.2f%%", v * 100.0);
  } else {
    std::snprintf(buf, sizeof buf, "%.4f", v);
  }
  return buf;
}

std::string format_delta(double v, bool percent) {
  if (!std::isfinite(v)) return format_value(v, percent);
  char buf[48];
  if (percent) {
    std::snprintf(buf, sizeof buf, "%+.2f%%", v * 100.0);
  } else {
    std::snprintf(buf, sizeof buf, "%+.4f", v);
  }
  return buf;
}

std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

}  // namespace

std::vector<DeltaRow> compare_reports(std::string_view current_json, std::string_view baseline_json) {
  const auto current = flatten(current_json);
  const auto baseline = flatten(baseline_json);
  std::vector<std::string> a, b;
  for (const auto& [k, v] : current) a.push_back(k);
  for (const auto& [k, v] : baseline) b.push_back(k);
  if (a != b) throw MetricMismatch("reports carry different metric sets");
  std::vector<DeltaRow> rows;
  for (std::size_t i = 0; i < current.size(); ++i) {
    DeltaRow r;
    r.metric = current[i].first;
    r.current = current[i].second.value;
    r.baseline = baseline[i].second.value;
    r.percent_points = current[i].second.percent_points;
    r.delta = r.current == r.baseline ? 0.0 : r.current - r.baseline;
    rows.push_back(r);
  }
  return rows;
}

std::string render_deltas(const std::vector<DeltaRow>& rows) {
  std::string out = pad("metric", 10) + pad("current", 12) + pad("baseline", 12) + "delta\n";
  for (const auto& r : rows) {
    out += pad(r.metric, 10) + pad(format_value(r.current, r.percent_points), 12) +
           pad(format_value(r.baseline, r.percent_points), 12) + format_delta(r.delta, r.percent_points) + "\n";
  }
  return out;
}

std::string deltas_to_json(const std::vector<DeltaRow>& rows) {
  auto num = [](double v) -> json {
    if (std::isfinite(v)) return v;
    return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
  };
  json arr = json::array();
  for (const auto& r : rows) {
    arr.push_back({{"metric", r.metric},
                   {"current", num(r.current)},
                   {"baseline", num(r.baseline)},
                   {"delta", num(r.delta)},
                   {"delta_display", format_delta(r.delta, r.percent_points)}});
  }
  return arr.dump(2);
}

std::string render_ablation(const train::AblationTable& table) {
  auto cell = [](const train::MetricSummary& s) {
    char buf[64];
    if (!std::isfinite(s.mean)) return format_value(s.mean, false);
    std::snprintf(buf, sizeof buf, "%.4f+-%.4f", s.mean, std::isfinite(s.std) ? s.std : 0.0);
    return std::string(buf);
  };
  std::string out = pad("family", 14) + pad("K", 4) + pad("PNR", 18) + pad("AUC", 18) + pad("P(1)", 18) +
                    pad("R(1)", 18) + pad("F1(1)", 18) + pad("P(0)", 18) + pad("R(0)", 18) + "F1(0)\n";
  for (const auto& r : table.rows) {
    out += pad(r.family, 14) + pad(std::to_string(r.layers), 4) + pad(cell(r.pnr), 18) + pad(cell(r.auc), 18) +
           pad(cell(r.precision1), 18) + pad(cell(r.recall1), 18) + pad(cell(r.f1_1), 18) +
           pad(cell(r.precision0), 18) + pad(cell(r.recall0), 18) + cell(r.f1_0) + "\n";
  }
  out += "seeds:";
  for (auto s : table.seeds) out += " " + std::to_string(s);
  out += "\n";
  for (const auto& note : table.notes) out += note + "\n";
  return out;
}

}  // namespace layoutrank::pipeline
