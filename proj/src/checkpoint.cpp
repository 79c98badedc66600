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

#include "layoutrank/checkpoint.hpp"

#include <json.hpp>

#include "layoutrank/errors.hpp"
#include "layoutrank/util.hpp"

namespace layoutrank {

using nlohmann::json;

namespace {

json config_json(const model::ModelConfig& c) {
  return {{"arch", std::string(model::to_string(c.arch))},
          {"readout", std::string(model::to_string(c.readout))},
          {"use_category", c.use_category},
          {"dim", c.dim},
          {"layers", c.layers},
          {"dropout", c.dropout},
          {"leaky_slope", c.leaky_slope},
          {"heads", c.heads},
          {"sigmoid_head", c.sigmoid_head}};
}

model::ModelConfig config_from_json(const json& j) {
  model::ModelConfig c;
  const auto arch = j.at("arch").get<std::string>();
  if (arch == "GAT") {
    c.arch = model::Arch::GAT;
  } else if (arch == "GIN") {
    c.arch = model::Arch::GIN;
  } else {
    throw DataError("unknown arch " + arch);
  }
  const auto readout = j.at("readout").get<std::string>();
  if (readout == "virtual") {
    c.readout = model::Readout::Virtual;
  } else if (readout == "mean_pool") {
    c.readout = model::Readout::MeanPool;
  } else {
    throw DataError("unknown readout " + readout);
  }
  c.use_category = j.at("use_category").get<bool>();
  c.dim = j.at("dim").get<std::size_t>();
  c.layers = j.at("layers").get<std::size_t>();
  c.dropout = j.at("dropout").get<double>();
  c.leaky_slope = j.at("leaky_slope").get<double>();
  c.heads = j.at("heads").get<std::size_t>();
  c.sigmoid_head = j.at("sigmoid_head").get<bool>();
  return c;
}

}  // namespace

std::string Checkpoint::to_json() const {
  json j;
  j["format"] = "layoutrank-checkpoint";
  j["version"] = kVersion;
  j["config"] = config_json(config);
  j["schema_hash"] = schema_hash;
  j["epoch"] = epoch;
  j["eval_auc"] = eval_auc;
  json tensors = json::array();
  for (std::size_t i = 0; i < params.size(); ++i) {
    const auto& t = params.tensors()[i];
    tensors.push_back({{"name", params.names()[i]},
                       {"shape", {t.rows(), t.cols()}},
                       {"data", std::vector<double>(t.data().begin(), t.data().end())}});
  }
  j["tensors"] = std::move(tensors);
  return j.dump();
}

Checkpoint Checkpoint::from_json(std::string_view text) {
  Checkpoint c;
  try {
    auto j = json::parse(text);
    if (!j.is_object() || j.value("format", "") != "layoutrank-checkpoint") {
      throw VersionError("not a layoutrank checkpoint");
    }
    if (j.at("version").get<int>() != kVersion) {
      throw VersionError("checkpoint version " + j.at("version").dump() + " is not supported");
    }
    c.config = config_from_json(j.at("config"));
    c.schema_hash = j.at("schema_hash").get<std::string>();
    c.epoch = j.at("epoch").get<std::size_t>();
    c.eval_auc = j.at("eval_auc").get<double>();
    for (const auto& t : j.at("tensors")) {
      const auto shape = t.at("shape").get<std::vector<std::size_t>>();
      auto data = t.at("data").get<std::vector<double>>();
      if (shape.size() != 2 || shape[0] * shape[1] != data.size()) {
        throw DataError("tensor " + t.at("name").get<std::string>() + " has inconsistent shape");
      }
      c.params.add(t.at("name").get<std::string>(), tensor::Tensor(shape[0], shape[1], std::move(data)));
    }
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed checkpoint: ") + e.what());
  }
  return c;
}

std::string Checkpoint::hash() const { return hex64(fnv1a64(to_json())); }

void Checkpoint::save(const std::filesystem::path& path) const { write_file(path, to_json() + "\n"); }

Checkpoint Checkpoint::load(const std::filesystem::path& path) { return from_json(read_file(path)); }

void Checkpoint::require_schema(const features::FeatureSchema& schema) const {
  const auto h = schema.hash();
  if (h != schema_hash) {
    throw SchemaMismatch("checkpoint was trained on schema " + schema_hash + ", got " + h);
  }
}

}  // namespace layoutrank
