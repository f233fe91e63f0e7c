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

#include "memfix/repair.h"

#include <algorithm>
#include <chrono>
#include <ctime>

#include "memfix/error.h"
#include "memfix/text.h"

namespace memfix {
namespace {

using Clock = std::chrono::steady_clock;

double SecondsSince(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string UtcTimestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::size_t MessageTokens(const ChatMessage& m, const TokenEstimator& estimator) {
  return estimator ? estimator(m.content) : EstimateTokens(m.content);
}

// The text shown to the model when the last round gave no usable trace.
std::string FallbackFeedback(const RepairAttempt& attempt) {
  if (!attempt.compiled && !attempt.compile_diagnostics.empty()) {
    return attempt.compile_diagnostics;
  }
  if (!attempt.outcome.diagnostic.empty()) return attempt.outcome.diagnostic;
  if (attempt.outcome.timed_out) return "Verification timed out.";
  return "Verification was inconclusive.";
}

std::optional<std::string> FeedbackFor(const VerifierOutcome& outcome,
                                       FeedbackKind kind) {
  if (kind == FeedbackKind::kNone) return std::nullopt;
  return ReduceFeedback(outcome, kind);
}

nlohmann::json ConversationJson(const std::vector<ChatMessage>& messages) {
  nlohmann::json out = nlohmann::json::array();
  for (const ChatMessage& m : messages) {
    out.push_back({{"role", ChatRoleName(m.role)}, {"content", m.content}});
  }
  return out;
}

void PersistAttempt(const std::filesystem::path& dir, const RepairAttempt& a,
                    const std::vector<ChatMessage>& messages) {
  WriteFile(dir / "prompt.txt", a.prompt_rendered);
  WriteFile(dir / "conversation.json", ConversationJson(messages).dump(2) + "\n");
  WriteFile(dir / "reply.txt", a.reply);
  if (!a.patched_source.empty()) WriteFile(dir / "patched.c", a.patched_source);
  if (!a.compile_diagnostics.empty()) {
    WriteFile(dir / "compile.txt", a.compile_diagnostics);
  }
  if (!a.outcome.raw_output.empty() || a.outcome.timed_out) {
    WriteFile(dir / "verifier.txt", a.outcome.raw_output);
  }
  WriteFile(dir / "metrics.json", RecordToJson(a.metrics).dump(2) + "\n");
}

}  // namespace

std::string RepairConfig::Validate(const PromptLibrary& library) const {
  if (max_attempts < 1) return "max_attempts must be at least 1";
  if (!(temperature >= 0.0)) return "temperature must be >= 0";
  if (max_attempts > 1 &&
      prompt_spec.source_strategy == SourceStrategy::kContextual) {
    return "iterative repair (max_attempts > 1) shows the model one line at a "
           "time; the contextual source strategy is single-shot only";
  }
  try {
    library.Validate(prompt_spec);
  } catch (const Error& e) {
    return e.what();
  }
  return llm.Validate();
}

Conversation BuildConversation(const std::vector<RepairAttempt>& history,
                               const RepairState& current,
                               const PromptSpec& spec, HistoryFormat format,
                               const PromptLibrary& library,
                               std::size_t token_budget,
                               const TokenEstimator& estimator) {
  auto fit = [&](std::size_t budget) {
    return library.FitToContext(spec, current.source, current.fault_line,
                                current.feedback, budget, estimator);
  };

  std::vector<const RepairAttempt*> answered;
  for (const RepairAttempt& a : history) {
    if (!a.reply.empty()) answered.push_back(&a);
  }

  Conversation conversation;
  if (format == HistoryFormat::kLatestStateOnly || answered.empty()) {
    conversation.current = fit(token_budget);
    conversation.messages.push_back({ChatRole::kUser, conversation.current.prompt});
    return conversation;
  }

  const ChatMessage first{ChatRole::kUser, answered.front()->prompt_rendered};
  const ChatMessage last_reply{ChatRole::kAssistant, answered.back()->reply};
  // Droppable (reply_i, prompt_{i+1}) pairs, oldest first.
  std::vector<std::pair<ChatMessage, ChatMessage>> middle;
  for (std::size_t i = 0; i + 1 < answered.size(); ++i) {
    middle.push_back({{ChatRole::kAssistant, answered[i]->reply},
                      {ChatRole::kUser, answered[i + 1]->prompt_rendered}});
  }

  const std::size_t fixed =
      MessageTokens(first, estimator) + MessageTokens(last_reply, estimator);
  std::size_t middle_tokens = 0;
  for (const auto& [r, u] : middle) {
    middle_tokens += MessageTokens(r, estimator) + MessageTokens(u, estimator);
  }

  std::optional<FitResult> chosen;
  std::size_t dropped = 0;
  for (; dropped <= middle.size(); ++dropped) {
    if (dropped > 0) {
      const auto& [r, u] = middle[dropped - 1];
      middle_tokens -= MessageTokens(r, estimator) + MessageTokens(u, estimator);
    }
    const std::size_t used = fixed + middle_tokens;
    if (used >= token_budget) continue;
    try {
      FitResult r = fit(token_budget - used);
      const bool last_chance = dropped == middle.size();
      if (!r.feedback_truncated || last_chance) {
        chosen = std::move(r);
        break;
      }
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kBudgetTooSmall) throw;
    }
  }
  if (!chosen) {
    throw Error(ErrorCode::kBudgetTooSmall,
                "conversation history leaves no room for the newest prompt");
  }

  conversation.current = std::move(*chosen);
  conversation.messages.push_back(first);
  for (std::size_t i = dropped; i < middle.size(); ++i) {
    conversation.messages.push_back(middle[i].first);
    conversation.messages.push_back(middle[i].second);
  }
  conversation.messages.push_back(last_reply);
  conversation.messages.push_back({ChatRole::kUser, conversation.current.prompt});
  if (format == HistoryFormat::kReverse) {
    std::reverse(conversation.messages.begin(), conversation.messages.end());
  }
  return conversation;
}

RepairResult FixCode(const Sample& sample, const RepairConfig& config,
                     const RepairServices& services) {
  if (services.llm == nullptr || services.verifier == nullptr ||
      services.library == nullptr) {
    throw Error(ErrorCode::kInternal, "repair services are incomplete");
  }
  const PromptLibrary& library = *services.library;
  if (std::string problem = config.Validate(library); !problem.empty()) {
    throw Error(ErrorCode::kConfigError, problem);
  }
  const PromptSpec& spec = config.prompt_spec;
  LlmConfig llm_config = config.llm;
  llm_config.temperature = config.temperature;
  const bool one_line = spec.source_strategy == SourceStrategy::kOneLine;

  MetricRecord base_record;
  base_record.job_id = services.job_id;
  base_record.sample_id = sample.id;
  base_record.prompt_id = spec.Id(library);
  base_record.template_family =
      std::string(TemplateFamilyName(library.Get(spec.template_id).family));
  base_record.source_strategy = spec.source_strategy;
  base_record.feedback_kind = spec.feedback_kind;
  base_record.feedback_position = spec.feedback_position;
  base_record.backticks = spec.backticks;
  base_record.temperature = config.temperature;
  base_record.history_format = config.history_format;
  base_record.max_attempts = config.max_attempts;

  RepairResult result;
  result.initial_outcome = services.verifier->Verify(sample.source_text, sample.id);
  if (services.artifact_dir) {
    WriteFile(*services.artifact_dir / "initial-verifier.txt",
              result.initial_outcome.raw_output);
  }
  if (result.initial_outcome.verdict == Verdict::kSafe) {
    result.initial_safe = true;
    return result;
  }
  if (result.initial_outcome.verdict != Verdict::kUnsafe ||
      !result.initial_outcome.fault_line) {
    // Nothing to localize the repair on.
    return result;
  }

  RepairState latest{sample.source_text, *result.initial_outcome.fault_line,
                     FeedbackFor(result.initial_outcome, spec.feedback_kind)};
  // LSO only moves on after a verifier-confirmed Unsafe state.
  RepairState checked = latest;

  for (int k = 0; k < config.max_attempts; ++k) {
    RepairAttempt attempt;
    attempt.index = k;
    attempt.metrics = base_record;
    attempt.metrics.attempt_index = k;
    attempt.metrics.wall.timestamp = UtcTimestamp();
    const RepairState& state =
        config.history_format == HistoryFormat::kLatestStateOnly ? checked : latest;
    attempt.feedback = state.feedback;

    std::vector<ChatMessage> messages;
    bool verified_round = false;
    try {
      Conversation conversation =
          BuildConversation(result.attempts, state, spec, config.history_format,
                            library, llm_config.max_context_tokens,
                            services.estimator);
      messages = std::move(conversation.messages);
      attempt.window = conversation.current.window;
      attempt.feedback = conversation.current.feedback;
      attempt.prompt_rendered = conversation.current.prompt;
      attempt.conversation_length = messages.size();

      auto start = Clock::now();
      attempt.reply = services.llm->Complete(messages, llm_config);
      attempt.metrics.wall.llm_seconds = SecondsSince(start);

      attempt.extracted = ExtractCode(attempt.reply, one_line);
      attempt.patched_source = Splice(state.source, attempt.window, attempt.extracted);

      if (services.compiler != nullptr) {
        CompileResult compiled = services.compiler->Check(attempt.patched_source);
        attempt.compiled = compiled.ok;
        attempt.compile_diagnostics = std::move(compiled.diagnostics);
        attempt.metrics.wall.compile_seconds = compiled.wall_seconds;
      } else {
        attempt.compiled = true;
      }

      attempt.outcome = services.verifier->Verify(attempt.patched_source, sample.id);
      attempt.metrics.wall.verify_seconds = attempt.outcome.wall_time_seconds;
      verified_round = true;
    } catch (const Error& e) {
      if (e.code() == ErrorCode::kAuthMissing ||
          e.code() == ErrorCode::kBinaryNotFound) {
        throw;
      }
      attempt.error = e.what();
    }

    attempt.metrics.syntax_score =
        SyntaxScore(attempt.extracted.empty() ? attempt.reply : attempt.extracted);
    attempt.metrics.relevance =
        attempt.reply.empty() ? 0.0
                              : RelevanceMatch(attempt.window.text, attempt.extracted);
    attempt.metrics.compiled = attempt.compiled;
    attempt.metrics.verdict = attempt.outcome.verdict;
    attempt.metrics.verified = verified_round && attempt.outcome.verdict == Verdict::kSafe;
    attempt.metrics.error = attempt.error;

    if (services.artifact_dir) {
      PersistAttempt(*services.artifact_dir / ("attempt-" + std::to_string(k)),
                     attempt, messages);
    }

    const bool safe = attempt.metrics.verified;
    if (verified_round && !safe) {
      RepairState next;
      next.source = attempt.patched_source;
      if (attempt.outcome.verdict == Verdict::kUnsafe && attempt.outcome.fault_line &&
          *attempt.outcome.fault_line <= CountLines(next.source)) {
        next.fault_line = *attempt.outcome.fault_line;
        next.feedback = FeedbackFor(attempt.outcome, spec.feedback_kind);
        checked = next;
      } else {
        next.fault_line = std::min(latest.fault_line,
                                   std::max(1, CountLines(next.source)));
        if (spec.feedback_kind != FeedbackKind::kNone) {
          next.feedback = FallbackFeedback(attempt);
        }
      }
      latest = std::move(next);
    }

    result.attempts.push_back(std::move(attempt));
    if (safe) {
      result.success = true;
      result.success_attempt = k;
      break;
    }
  }
  return result;
}

}  // namespace memfix
