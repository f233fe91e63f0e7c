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

#ifndef MEMFIX_PROMPT_H_
#define MEMFIX_PROMPT_H_

#include <array>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "memfix/llm.h"
#include "memfix/verifier.h"
#include "memfix/windowing.h"

namespace memfix {

enum class TemplateFamily { kOld, kSimple, kPersona };
enum class FeedbackPosition { kNone, kBeforeSource, kAfterSource };
enum class SourceStrategy { kContextual, kOneLine };

std::string_view TemplateFamilyName(TemplateFamily family);
std::string_view FeedbackPositionName(FeedbackPosition position);
std::string_view SourceStrategyName(SourceStrategy strategy);
TemplateFamily ParseTemplateFamily(std::string_view name);
FeedbackPosition ParseFeedbackPosition(std::string_view name);
SourceStrategy ParseSourceStrategy(std::string_view name);

inline constexpr std::array<std::string_view, 6> kRoles = {
    "Programmer with 1 million years of experience",
    "Senior software engineer",
    "Automated code repair tool",
    "Artificial intelligence that specializes in repairing C programs",
    "The smartest human in the universe",
    "Dog",
};

struct PromptTemplate {
  int id = 0;
  std::string label;  // "0".."11", "old", "9-2", "11-2"
  TemplateFamily family = TemplateFamily::kSimple;
  FeedbackPosition feedback_position = FeedbackPosition::kNone;
  std::string text;

  bool requires_feedback() const {
    return feedback_position != FeedbackPosition::kNone;
  }
  bool requires_role() const { return family == TemplateFamily::kPersona; }
};

class PromptLibrary;

struct PromptSpec {
  int template_id = 0;
  std::optional<int> role_index;
  FeedbackKind feedback_kind = FeedbackKind::kNone;
  FeedbackPosition feedback_position = FeedbackPosition::kNone;
  SourceStrategy source_strategy = SourceStrategy::kContextual;
  bool backticks = true;

  // "x.y.z": template label, role index (0 without persona), feedback type
  // (0 none, 1 VP, 2 CE).
  std::string Id(const PromptLibrary& library) const;
  // Id plus strategy and backtick setting; unique across a sweep.
  std::string Key(const PromptLibrary& library) const;

  friend bool operator==(const PromptSpec&, const PromptSpec&) = default;
};

struct EnumerateOptions {
  std::vector<SourceStrategy> source_strategies = {SourceStrategy::kContextual,
                                                   SourceStrategy::kOneLine};
  bool backticks = true;
  // Template ids taking part; the default is the single-shot space 0..12.
  std::vector<int> template_ids = {0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12};
  std::vector<int> role_indices = {0, 1, 2, 3, 4, 5};
  std::vector<FeedbackKind> feedback_kinds = {FeedbackKind::kViolatedProperty,
                                              FeedbackKind::kCounterexample};
};

struct FitResult {
  CodeWindow window;
  std::optional<std::string> feedback;
  bool feedback_truncated = false;
  std::string prompt;
  std::size_t tokens = 0;
};

class PromptLibrary {
 public:
  // The templates compiled into the binary.
  static const PromptLibrary& Default();
  static PromptLibrary Parse(std::string_view text);
  static PromptLibrary LoadFile(const std::filesystem::path& path);

  const std::vector<PromptTemplate>& templates() const { return templates_; }
  // Throws Error{kUnknownTemplate}.
  const PromptTemplate& Get(int template_id) const;
  const PromptTemplate& GetByLabel(std::string_view label) const;

  // Throws Error{kInvalidPromptSpec} or Error{kUnknownTemplate}.
  void Validate(const PromptSpec& spec) const;

  // Throws Error{kMissingFeedback} when feedback presence disagrees with the
  // spec or template, Error{kUnknownTemplate}.
  std::string Render(const PromptSpec& spec, std::string_view window_text,
                     std::optional<std::string_view> feedback) const;

  std::vector<PromptSpec> EnumerateAll(const EnumerateOptions& options) const;

  // Largest window (per PromptSpec::source_strategy) whose rendered prompt fits in
  // `token_budget`; feedback is cut from the end only if the smallest window
  // still does not fit. Throws Error{kBudgetTooSmall}.
  FitResult FitToContext(const PromptSpec& spec, std::string_view source,
                         int fault_line, std::optional<std::string_view> feedback,
                         std::size_t token_budget,
                         const TokenEstimator& estimator = {}) const;

 private:
  std::vector<PromptTemplate> templates_;
};

// Spec for a given template with its feedback position filled in.
PromptSpec MakeSpec(const PromptLibrary& library, int template_id,
                    std::optional<int> role_index, FeedbackKind feedback_kind,
                    SourceStrategy strategy, bool backticks);

}  // namespace memfix

#endif  // MEMFIX_PROMPT_H_
