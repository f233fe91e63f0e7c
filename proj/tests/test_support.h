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

#ifndef MEMFIX_TESTS_TEST_SUPPORT_H_
#define MEMFIX_TESTS_TEST_SUPPORT_H_

#include <atomic>
#include <filesystem>
#include <functional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "memfix/patch_engine.h"
#include "memfix/text.h"
#include "memfix/verifier.h"

namespace memfix::testing {

inline std::filesystem::path Fixture(const std::string& rel) {
  return std::filesystem::path(MEMFIX_FIXTURES_DIR) / rel;
}

inline std::string ReadFixture(const std::string& rel) {
  return ReadFile(Fixture(rel));
}

inline std::filesystem::path FakeVerifierPath() {
  return Fixture("fake_esbmc.sh");
}

// Builds a source of `n` lines "line 1".."line n", newline-terminated.
inline std::string NumberedLines(int n) {
  std::string out;
  for (int i = 1; i <= n; ++i) out += "line " + std::to_string(i) + "\n";
  return out;
}

// Verifier double: Safe iff the source contains `fixed_marker`, otherwise
// Unsafe at `fault_line`. Counts calls.
class MarkerVerifier : public Verifier {
 public:
  MarkerVerifier(std::string fixed_marker, int fault_line)
      : marker_(std::move(fixed_marker)), fault_line_(fault_line) {}

  VerifierOutcome Verify(std::string_view source, std::string_view) override {
    ++calls_;
    VerifierOutcome o;
    if (source.find(marker_) != std::string_view::npos) {
      o.verdict = Verdict::kSafe;
      o.raw_output = "VERIFICATION SUCCESSFUL\n";
      return o;
    }
    o.verdict = Verdict::kUnsafe;
    o.violated_property = "Violated property:\n  file s.c line " +
                          std::to_string(fault_line_) +
                          " column 3 function main\n  array bounds violated";
    o.counterexample = "[Counterexample]\n\nState 1\n  i = 4\n\n" + o.violated_property;
    o.fault_line = fault_line_;
    o.raw_output = o.counterexample + "\n\nVERIFICATION FAILED\n";
    return o;
  }

  int calls() const { return calls_; }

 private:
  std::string marker_;
  int fault_line_;
  int calls_ = 0;
};

class StubCompiler : public CompileChecker {
 public:
  explicit StubCompiler(bool ok = true) : ok_(ok) {}
  CompileResult Check(std::string_view) override {
    ++calls_;
    return {ok_, ok_ ? "" : "s.c:1:1: error: stub failure", 0.0};
  }
  int calls() const { return calls_; }

 private:
  bool ok_;
  int calls_ = 0;
};

}  // namespace memfix::testing

#endif  // MEMFIX_TESTS_TEST_SUPPORT_H_
