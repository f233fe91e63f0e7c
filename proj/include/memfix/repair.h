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

#ifndef MEMFIX_REPAIR_H_
#define MEMFIX_REPAIR_H_

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "memfix/corpus.h"
#include "memfix/llm.h"
#include "memfix/metrics.h"
#include "memfix/patch_engine.h"
#include "memfix/prompt.h"
#include "memfix/verifier.h"
#include "memfix/windowing.h"

namespace memfix {

struct RepairConfig {
  PromptSpec prompt_spec;
  HistoryFormat history_format = HistoryFormat::kLatestStateOnly;
  int max_attempts = 5;
  double temperature = 1.0;  // replaces llm.temperature for every request
  LlmConfig llm;

  // Empty when valid. max_attempts == 1 is single-shot; anything above is
  // iterative and requires the one-line source strategy.
  std::string Validate(const PromptLibrary& library) const;
};

struct RepairAttempt {
  int index = 0;
  CodeWindow window;
  std::optional<std::string> feedback;  // as shown to the model
  std::string prompt_rendered;          // the newest user message
  std::size_t conversation_length = 0;
  std::string reply;
  std::string extracted;
  std::string patched_source;
  bool compiled = false;
  std::string compile_diagnostics;
  VerifierOutcome outcome;
  std::string error;  // why the attempt stopped early, if it did
  MetricRecord metrics;
};

struct RepairResult {
  bool success = false;
  // The unpatched source already verified Safe; no attempt was made.
  bool initial_safe = false;
  VerifierOutcome initial_outcome;
  std::vector<RepairAttempt> attempts;
  std::optional<int> success_attempt;
};

// The program state a new user message is rendered from.
struct RepairState {
  std::string source;
  int fault_line = 1;
  std::optional<std::string> feedback;
};

struct Conversation {
  std::vector<ChatMessage> messages;
  FitResult current;  // the window and prompt of the newest user message
};

// LSO: one user message for `current`. Forward: the first prompt, then
// (reply, prompt) pairs in order, ending with `current`; the oldest pairs
// after the first prompt are dropped while the newest prompt would otherwise
// need its feedback cut. Reverse: Forward reversed. Attempts that produced
// no reply are skipped. Throws Error{kBudgetTooSmall}.
Conversation BuildConversation(const std::vector<RepairAttempt>& history,
                               const RepairState& current,
                               const PromptSpec& spec, HistoryFormat format,
                               const PromptLibrary& library,
                               std::size_t token_budget,
                               const TokenEstimator& estimator = {});

struct RepairServices {
  LlmClient* llm = nullptr;
  Verifier* verifier = nullptr;
  CompileChecker* compiler = nullptr;  // null: compile step skipped
  const PromptLibrary* library = &PromptLibrary::Default();
  TokenEstimator estimator;
  std::string job_id;
  // Per-attempt artifacts go to <artifact_dir>/attempt-<k>/ when set.
  std::optional<std::filesystem::path> artifact_dir;
};

// Verifies the sample, then runs up to max_attempts rounds of prompt, reply,
// splice, compile and verify, stopping at the first Safe verdict. Errors in
// a round are recorded on its attempt; Error{kAuthMissing} and
// Error{kBinaryNotFound} propagate.
RepairResult FixCode(const Sample& sample, const RepairConfig& config,
                     const RepairServices& services);

}  // namespace memfix

#endif  // MEMFIX_REPAIR_H_
