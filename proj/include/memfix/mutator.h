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

#ifndef MEMFIX_MUTATOR_H_
#define MEMFIX_MUTATOR_H_

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "memfix/corpus.h"
#include "memfix/patch.h"

namespace memfix {

enum class MutationKind {
  kRelationalReplace,  // < <-> <=, > <-> >=, == <-> !=
  kArithmeticReplace,  // binary + <-> -, * <-> /
  kIndexShift,         // integer literal directly inside [...] gets +1
  kCallRemoval,        // `f(...);` statement deleted for configured f
};

std::string_view MutationKindName(MutationKind kind);
MutationKind ParseMutationKind(std::string_view name);

struct MutationOperator {
  MutationKind kind;
  bool enabled = true;
};

struct MutationConfig {
  std::vector<MutationOperator> operators = {
      {MutationKind::kRelationalReplace, true},
      {MutationKind::kArithmeticReplace, true},
      {MutationKind::kIndexShift, true},
      {MutationKind::kCallRemoval, true},
  };
  std::vector<std::string> removable_calls = {"free"};
  int context_lines = 3;

  bool Enabled(MutationKind kind) const;
};

// One single-hunk patch per applicable (site, operator) pair, in source
// order. Sites inside comments, string/char literals and preprocessor
// directives are never touched. Patch ids are `<Kind>-<line>-<column>`.
std::vector<PatchFile> EnumerateMutations(std::string_view source,
                                          const MutationConfig& config);

// One Unlabeled mutant per (base sample, patch). Mutant ids are
// `<base id>.<patch id>`.
std::vector<Sample> Expand(const std::vector<Sample>& corpus,
                           const MutationConfig& config);

// Mutants from externally produced unified diffs laid out as
// `<patch_root>/<base-name>/<patch-id>.patch` (or `.diff`). Bases without a
// patch directory produce nothing.
std::vector<Sample> ExpandFromPatchDirectory(
    const std::vector<Sample>& corpus, const std::filesystem::path& patch_root);

}  // namespace memfix

#endif  // MEMFIX_MUTATOR_H_
