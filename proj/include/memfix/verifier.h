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

#ifndef MEMFIX_VERIFIER_H_
#define MEMFIX_VERIFIER_H_

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace memfix {

enum class Verdict { kSafe, kUnsafe, kUnknown };

std::string_view VerdictName(Verdict verdict);
Verdict ParseVerdict(std::string_view name);

// Which part of the verifier report goes into a prompt.
enum class FeedbackKind {
  kNone,
  kViolatedProperty,  // "VP": the short violated-property block
  kCounterexample,    // "CE": full trace plus the violated property
};

std::string_view FeedbackKindName(FeedbackKind kind);  // "none", "VP", "CE"
FeedbackKind ParseFeedbackKind(std::string_view name);

// The exact memory-safety flag set used for the dataset. `-Iincludes` and
// `-Inetworks` are relative to VerifierConfig::working_dir.
std::vector<std::string> DefaultVerifierFlags();

struct VerifierConfig {
  std::string binary_path = "esbmc";
  std::vector<std::string> flags = DefaultVerifierFlags();
  int timeout_seconds = 300;
  // Extra include directories, passed as -I<dir> after `flags`.
  std::vector<std::filesystem::path> include_dirs;
  // Directory the tool runs in; defaults to the per-call scratch directory.
  std::filesystem::path working_dir;
  // Time allowed after the timeout before the process group is killed.
  int grace_seconds = 5;
  // Preserve the scratch directory of calls that did not reach a verdict.
  bool keep_artifacts = false;

  // Empty when valid, otherwise a description of the first problem.
  std::string Validate() const;
};

struct VerifierOutcome {
  Verdict verdict = Verdict::kUnknown;
  std::string violated_property;  // empty unless Unsafe
  std::string counterexample;     // empty unless Unsafe
  std::optional<int> fault_line;
  std::optional<std::string> fault_statement;
  double wall_time_seconds = 0.0;
  bool timed_out = false;
  // Set for Unknown verdicts that were not timeouts (e.g. parse errors or
  // output without a verdict marker).
  bool inconclusive = false;
  std::string diagnostic;
  std::string raw_output;
};

// Output grammar of the target tool. Defaults match ESBMC.
struct OutputProfile {
  std::string success_marker = "VERIFICATION SUCCESSFUL";
  std::string failure_marker = "VERIFICATION FAILED";
  std::string property_header = "Violated property:";
  std::string counterexample_header = "[Counterexample]";
  std::vector<std::string> timeout_markers = {"Timed out"};
};

// Pure: the same inputs always give the same outcome.
VerifierOutcome ParseVerifierOutput(std::string_view raw, bool timed_out,
                                    double wall_seconds,
                                    const OutputProfile& profile = {});

// VP returns the violated-property block; CE returns the counterexample trace
// through the end of that block, so the VP text is always contained in it.
// Throws Error{kNotUnsafe} unless outcome.verdict is Unsafe, and
// Error{kMissingFeedback} for FeedbackKind::kNone.
std::string ReduceFeedback(const VerifierOutcome& outcome, FeedbackKind kind);

class Verifier {
 public:
  virtual ~Verifier() = default;
  // `name_hint` names the scratch file; it does not affect the verdict.
  virtual VerifierOutcome Verify(std::string_view source,
                                 std::string_view name_hint) = 0;
};

// Runs the configured binary as a subprocess. Throws Error{kBinaryNotFound}
// when it cannot be executed; every other failure is an Unknown verdict.
class ProcessVerifier : public Verifier {
 public:
  explicit ProcessVerifier(VerifierConfig config, OutputProfile profile = {});

  VerifierOutcome Verify(std::string_view source,
                         std::string_view name_hint) override;

  const VerifierConfig& config() const { return config_; }

  // The argument vector used for a file; exposed for inspection.
  std::vector<std::string> CommandLine(const std::filesystem::path& file) const;

 private:
  VerifierConfig config_;
  OutputProfile profile_;
};

}  // namespace memfix

#endif  // MEMFIX_VERIFIER_H_
