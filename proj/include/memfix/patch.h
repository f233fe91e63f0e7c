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

#ifndef MEMFIX_PATCH_H_
#define MEMFIX_PATCH_H_

#include <string>
#include <string_view>
#include <vector>

namespace memfix {

// One contiguous change. `anchor_line` is the 1-based line in the target of
// the first removed line (for a pure insertion, the line the added text goes
// in front of). Context lines sit immediately before/after the removed block.
struct PatchHunk {
  std::vector<std::string> context_before;
  std::vector<std::string> removed;
  std::vector<std::string> added;
  std::vector<std::string> context_after;
  int anchor_line = 1;

  friend bool operator==(const PatchHunk&, const PatchHunk&) = default;
};

struct PatchFile {
  std::string id;
  std::string target;  // base file path, informational
  std::vector<PatchHunk> hunks;

  friend bool operator==(const PatchFile&, const PatchFile&) = default;
};

// Throws Error{kOverlappingHunks} if hunks are unsorted or overlap, and
// Error{kContextMismatch} if any context or removed line differs from base.
std::string ApplyPatch(std::string_view base, const PatchFile& patch);

// The patch that maps ApplyPatch(base, patch) back to base.
PatchFile InvertPatch(const PatchFile& patch);

// Unified diff text ("--- a/<target>", "+++ b/<target>", "@@ ... @@").
std::string ToUnifiedDiff(const PatchFile& patch);

// Accepts single-file unified diffs such as those written by Mull's patch
// reporter or `diff -u`. Hunks containing several change groups separated by
// context are split into one PatchHunk per group.
PatchFile ParseUnifiedDiff(std::string_view text, std::string id = {});

}  // namespace memfix

#endif  // MEMFIX_PATCH_H_
