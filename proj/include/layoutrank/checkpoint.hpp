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

#ifndef LAYOUTRANK_CHECKPOINT_HPP
#define LAYOUTRANK_CHECKPOINT_HPP

#include <filesystem>
#include <string>

#include "layoutrank/model.hpp"

namespace layoutrank {

struct Checkpoint {
  static constexpr int kVersion = 1;

  model::ModelConfig config;
  model::ModelParams params;
  std::string schema_hash;
  std::size_t epoch = 0;  // epoch the parameters were taken from, 0 = initial
  double eval_auc = 0.0;

  std::string to_json() const;
  // Throws VersionError on a foreign format or version, DataError when malformed.
  static Checkpoint from_json(std::string_view text);
  // Fingerprint of the serialized checkpoint; used as the model version.
  std::string hash() const;

  void save(const std::filesystem::path& path) const;
  static Checkpoint load(const std::filesystem::path& path);

  // Throws SchemaMismatch unless the checkpoint was trained on this schema.
  void require_schema(const features::FeatureSchema& schema) const;
};

}  // namespace layoutrank

#endif  // LAYOUTRANK_CHECKPOINT_HPP
