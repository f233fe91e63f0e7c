// Copyright 2026 The memfix Authors
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

#ifndef MEMFIX_DATASET_H_
#define MEMFIX_DATASET_H_

#include <filesystem>
#include <vector>

#include "memfix/corpus.h"
#include "json.hpp"

namespace memfix {

// On-disk dataset:
//   <root>/manifest.jsonl                       one JSON object per sample
//   <root>/<category>/<base-name>/base.c        base samples
//   <root>/<category>/<base-name>/<mutation>.c  mutants
//   <root>/includes/, <root>/networks/          copied support headers
inline constexpr const char* kManifestName = "manifest.jsonl";

std::filesystem::path SampleRelativePath(const Sample& sample);

nlohmann::json SampleToJson(const Sample& sample);
Sample SampleFromJson(const nlohmann::json& j);

// Writes every sample's source file and the manifest (replacing it).
void WriteDataset(const std::filesystem::path& root,
                  const std::vector<Sample>& samples);

// Rewrites only the manifest.
void WriteManifest(const std::filesystem::path& root,
                   const std::vector<Sample>& samples);

// Reads the manifest and each sample's source text.
std::vector<Sample> LoadDataset(const std::filesystem::path& root);

}  // namespace memfix

#endif  // MEMFIX_DATASET_H_
