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

#include "memfix/dataset.h"

#include <sstream>

#include "memfix/error.h"
#include "memfix/text.h"

namespace memfix {

std::filesystem::path SampleRelativePath(const Sample& sample) {
  std::filesystem::path p = std::string(CategoryName(sample.category));
  p /= sample.base_name;
  p /= sample.mutation_id.value_or("base") + ".c";
  return p;
}

nlohmann::json SampleToJson(const Sample& sample) {
  nlohmann::json j;
  j["id"] = sample.id;
  j["category"] = CategoryName(sample.category);
  j["base"] = sample.base_name;
  j["base_path"] = sample.base_path;
  j["mutation"] = sample.mutation_id ? nlohmann::json(*sample.mutation_id)
                                     : nlohmann::json(nullptr);
  j["label"] = LabelName(sample.label);
  j["fault_line"] = sample.fault_line ? nlohmann::json(*sample.fault_line)
                                      : nlohmann::json(nullptr);
  j["verify_seconds"] = sample.verify_seconds;
  j["path"] = SampleRelativePath(sample).string();
  return j;
}

Sample SampleFromJson(const nlohmann::json& j) {
  Sample s;
  s.id = j.at("id").get<std::string>();
  s.category = ParseCategory(j.at("category").get<std::string>());
  s.base_name = j.at("base").get<std::string>();
  s.base_path = j.value("base_path", std::string());
  if (j.contains("mutation") && !j["mutation"].is_null()) {
    s.mutation_id = j["mutation"].get<std::string>();
  }
  s.label = ParseLabel(j.value("label", std::string("Unlabeled")));
  if (j.contains("fault_line") && !j["fault_line"].is_null()) {
    s.fault_line = j["fault_line"].get<int>();
  }
  s.verify_seconds = j.value("verify_seconds", 0.0);
  return s;
}

void WriteManifest(const std::filesystem::path& root,
                   const std::vector<Sample>& samples) {
  std::ostringstream out;
  for (const Sample& s : samples) out << SampleToJson(s).dump() << "\n";
  WriteFile(root / kManifestName, out.str());
}

void WriteDataset(const std::filesystem::path& root,
                  const std::vector<Sample>& samples) {
  for (const Sample& s : samples) {
    WriteFile(root / SampleRelativePath(s), s.source_text);
  }
  WriteManifest(root, samples);
}

std::vector<Sample> LoadDataset(const std::filesystem::path& root) {
  const auto manifest = root / kManifestName;
  if (!std::filesystem::exists(manifest)) {
    throw Error(ErrorCode::kIoError, "no manifest at " + manifest.string());
  }
  std::vector<Sample> samples;
  std::istringstream in(ReadFile(manifest));
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (IsBlank(line)) continue;
    try {
      Sample s = SampleFromJson(nlohmann::json::parse(line));
      s.source_text = ReadFile(root / SampleRelativePath(s));
      samples.push_back(std::move(s));
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kIoError, manifest.string() + ":" +
                                           std::to_string(line_no) + ": " +
                                           e.what());
    }
  }
  return samples;
}

}  // namespace memfix
