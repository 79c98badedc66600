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
#include <charconv>
#include <cmath>
#include <cstdio>

#include "layoutrank/errors.hpp"
#include "layoutrank/pipeline.hpp"
#include "layoutrank/util.hpp"

namespace layoutrank::pipeline {

namespace {

constexpr std::string_view kMagic = "#layoutrank-score-store";
constexpr std::string_view kVersion = "v1";

}  // namespace

ScoreStore::ScoreStore(std::string schema_hash, std::string model_version, std::vector<ScoreEntry> entries)
    : schema_hash_(std::move(schema_hash)), model_version_(std::move(model_version)), entries_(std::move(entries)) {
  std::sort(entries_.begin(), entries_.end(), [](const auto& a, const auto& b) { return a.url < b.url; });
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const auto& e = entries_[i];
    if (e.url.empty() || e.url.find_first_of("\t\n") != std::string::npos) {
      throw DataError("url '" + e.url + "' cannot be stored");
    }
    if (!(e.score >= 0.0 && e.score <= 1.0)) throw DataError("score for " + e.url + " is outside [0,1]");
    if (i > 0 && entries_[i - 1].url == e.url) throw DataError("duplicate url " + e.url);
  }
}

std::optional<double> ScoreStore::lookup(std::string_view url) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), url,
                             [](const ScoreEntry& e, std::string_view u) { return e.url < u; });
  if (it == entries_.end() || it->url != url) return std::nullopt;
  return it->score;
}

std::string ScoreStore::serialize() const {
  std::string out;
  out += kMagic;
  out += '\t';
  out += kVersion;
  out += "\tschema=" + schema_hash_ + "\tmodel=" + model_version_ + "\n";
  char buf[40];
  for (const auto& e : entries_) {
    std::snprintf(buf, sizeof buf, "%.17g", e.score);
    out += e.url + '\t' + buf + '\t' + e.model_version + '\n';
  }
  return out;
}

ScoreStore ScoreStore::parse(std::string_view text) {
  auto lines = split(text, '\n');
  if (lines.empty() || lines.front().empty()) throw DataError("score store has no header");
  auto header = split(lines.front(), '\t');
  if (header.size() != 4 || header[0] != kMagic) throw VersionError("not a layoutrank score store");
  if (header[1] != kVersion) throw VersionError("score store version " + header[1] + " is not supported");
  if (!header[2].starts_with("schema=") || !header[3].starts_with("model=")) {
    throw DataError("malformed score store header");
  }
  std::vector<ScoreEntry> entries;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    auto cols = split(lines[i], '\t');
    if (cols.size() != 3) throw DataError("score store line " + std::to_string(i + 1) + ": expected 3 columns");
    ScoreEntry e;
    e.url = cols[0];
    auto [ptr, ec] = std::from_chars(cols[1].data(), cols[1].data() + cols[1].size(), e.score);
    if (ec != std::errc() || ptr != cols[1].data() + cols[1].size()) {
      throw DataError("score store line " + std::to_string(i + 1) + ": bad score");
    }
    e.model_version = cols[2];
    entries.push_back(std::move(e));
  }
  return ScoreStore(header[2].substr(7), header[3].substr(6), std::move(entries));
}

void ScoreStore::save(const std::filesystem::path& path) const { write_file(path, serialize()); }

ScoreStore ScoreStore::load(const std::filesystem::path& path) { return parse(read_file(path)); }

}  // namespace layoutrank::pipeline
