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

#ifndef MEMFIX_CORPUS_H_
#define MEMFIX_CORPUS_H_

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace memfix {

enum class Category {
  kHopfieldNets,
  kPolyApprox,
  kReachProbDensity,
  kReinforcementLearning,
  kOther,
};

enum class Label { kUnlabeled, kSafe, kUnsafe, kUnknown };

std::string_view CategoryName(Category category);
Category ParseCategory(std::string_view name);  // unknown names map to kOther
std::string_view LabelName(Label label);
Label ParseLabel(std::string_view name);

// One C program of the dataset, either a base file or a mutant of one.
struct Sample {
  std::string id;
  Category category = Category::kOther;
  std::string source_text;
  std::string base_path;    // relative to the dataset root
  std::string base_name;    // file stem of the base
  std::optional<std::string> mutation_id;
  Label label = Label::kUnlabeled;
  std::optional<int> fault_line;
  double verify_seconds = 0.0;
};

// Deletes whole `__VERIFIER_assume(...);` and `__VERIFIER_assert(...);`
// statements. Calls that are not a statement of their own (embedded in an
// expression, or the body of an unbraced if/else/loop) are kept and reported
// through `warnings`. A line left blank by a removal is dropped entirely.
std::string StripVerifierIntrinsics(std::string_view source,
                                    std::vector<std::string>* warnings = nullptr);

// Keeps the first sample of each class of identical whitespace-stripped
// source text, preserving input order.
std::vector<Sample> Dedupe(const std::vector<Sample>& samples);

// Seed-corpus ingestion: every `.c` file under `seed_root` except those inside
// the top-level `includes/` and `networks/` support directories becomes a base
// sample. The category is the first path component when it names a known
// category. Intrinsics are stripped before deduplication.
struct SeedCorpus {
  std::vector<Sample> samples;
  std::vector<std::string> warnings;
  std::size_t files_read = 0;
};

SeedCorpus LoadSeedCorpus(const std::filesystem::path& seed_root);

}  // namespace memfix

#endif  // MEMFIX_CORPUS_H_
