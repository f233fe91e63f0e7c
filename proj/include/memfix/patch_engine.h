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

#ifndef MEMFIX_PATCH_ENGINE_H_
#define MEMFIX_PATCH_ENGINE_H_

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "memfix/windowing.h"

namespace memfix {

// The code part of a model reply. With fenced blocks, the interior of the
// first one (language tag dropped); otherwise the trimmed reply. With
// `expect_single_line`, only the first non-empty line of that candidate.
// Throws Error{kEmptyReply}.
std::string ExtractCode(std::string_view reply, bool expect_single_line);

// Replaces the window's lines of `original` with the lines of `replacement`
// (one trailing newline of the replacement is ignored). Throws
// Error{kWindowMismatch} if the window no longer matches `original`.
std::string Splice(std::string_view original, const CodeWindow& window,
                   std::string_view replacement);

struct CompilerConfig {
  std::string compiler = "cc";
  std::vector<std::string> flags = {"-std=gnu11"};
  std::vector<std::filesystem::path> include_dirs;
  int timeout_seconds = 60;
};

struct CompileResult {
  bool ok = false;
  std::string diagnostics;
  double wall_seconds = 0.0;
};

class CompileChecker {
 public:
  virtual ~CompileChecker() = default;
  virtual CompileResult Check(std::string_view source) = 0;
};

// Compile-only (-c) invocation in a private scratch directory. Throws
// Error{kCompilerNotFound}.
class ProcessCompileChecker : public CompileChecker {
 public:
  explicit ProcessCompileChecker(CompilerConfig config)
      : config_(std::move(config)) {}
  CompileResult Check(std::string_view source) override;

 private:
  CompilerConfig config_;
};

inline CompileResult CompileCheck(std::string_view source,
                                  const CompilerConfig& config) {
  return ProcessCompileChecker(config).Check(source);
}

// Length of the longest common subsequence, bit-parallel: O(|a|*|b|/64).
std::size_t LcsLength(std::string_view a, std::string_view b);

// LCS of the whitespace-stripped texts divided by the longer stripped
// length. Both empty gives 1, exactly one empty gives 0.
double RelevanceMatch(std::string_view input_code, std::string_view output_code);

}  // namespace memfix

#endif  // MEMFIX_PATCH_ENGINE_H_
