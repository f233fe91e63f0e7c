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

#include "memfix/verifier.h"

#include <algorithm>
#include <cctype>
#include <cstring>

#include "memfix/error.h"
#include "memfix/process.h"
#include "memfix/text.h"

namespace memfix {
namespace {

struct Block {
  std::size_t begin = std::string_view::npos;
  std::size_t end = std::string_view::npos;
};

// From the start of the line holding `header` to the next blank line.
Block FindPropertyBlock(std::string_view raw, std::string_view header) {
  Block block;
  std::size_t pos = raw.find(header);
  if (pos == std::string_view::npos) return block;
  std::size_t line_begin = pos;
  while (line_begin > 0 && raw[line_begin - 1] != '\n') --line_begin;
  block.begin = line_begin;
  std::size_t cursor = raw.find('\n', pos);
  while (cursor != std::string_view::npos) {
    std::size_t next = raw.find('\n', cursor + 1);
    std::string_view line = raw.substr(
        cursor + 1, (next == std::string_view::npos ? raw.size() : next) -
                        cursor - 1);
    if (IsBlank(line)) break;
    cursor = next;
  }
  block.end = cursor == std::string_view::npos ? raw.size() : cursor;
  return block;
}

std::optional<int> FirstLineNumber(std::string_view text) {
  std::size_t pos = 0;
  while ((pos = text.find("line ", pos)) != std::string_view::npos) {
    const bool word_start =
        pos == 0 || !std::isalnum(static_cast<unsigned char>(text[pos - 1]));
    std::size_t digits = pos + 5;
    int value = 0;
    bool any = false;
    while (digits < text.size() &&
           std::isdigit(static_cast<unsigned char>(text[digits]))) {
      value = value * 10 + (text[digits] - '0');
      any = true;
      ++digits;
    }
    if (word_start && any) return value;
    pos += 5;
  }
  return std::nullopt;
}

std::string TrimRight(std::string_view s) {
  std::size_t end = s.size();
  while (end > 0 && std::isspace(static_cast<unsigned char>(s[end - 1]))) --end;
  return std::string(s.substr(0, end));
}

std::string SanitizeName(std::string_view hint) {
  std::string out;
  for (char c : hint) {
    out.push_back(std::isalnum(static_cast<unsigned char>(c)) || c == '_' ||
                          c == '-' || c == '.'
                      ? c
                      : '_');
  }
  if (out.empty()) out = "sample";
  if (!out.ends_with(".c")) out += ".c";
  return out;
}

}  // namespace

std::string_view VerdictName(Verdict verdict) {
  switch (verdict) {
    case Verdict::kSafe: return "Safe";
    case Verdict::kUnsafe: return "Unsafe";
    case Verdict::kUnknown: return "Unknown";
  }
  return "Unknown";
}

Verdict ParseVerdict(std::string_view name) {
  if (name == "Safe") return Verdict::kSafe;
  if (name == "Unsafe") return Verdict::kUnsafe;
  if (name == "Unknown") return Verdict::kUnknown;
  throw Error(ErrorCode::kConfigError, "unknown verdict '" + std::string(name) + "'");
}

std::string_view FeedbackKindName(FeedbackKind kind) {
  switch (kind) {
    case FeedbackKind::kNone: return "none";
    case FeedbackKind::kViolatedProperty: return "VP";
    case FeedbackKind::kCounterexample: return "CE";
  }
  return "none";
}

FeedbackKind ParseFeedbackKind(std::string_view name) {
  if (name == "none" || name == "None") return FeedbackKind::kNone;
  if (name == "VP" || name == "vp") return FeedbackKind::kViolatedProperty;
  if (name == "CE" || name == "ce") return FeedbackKind::kCounterexample;
  throw Error(ErrorCode::kConfigError,
              "unknown feedback kind '" + std::string(name) + "'");
}

std::vector<std::string> DefaultVerifierFlags() {
  return {"--interval-analysis", "--goto-unwind", "--unlimited-goto-unwind",
          "--incremental-bmc",   "--state-hashing", "--add-symex-value-sets",
          "--k-step",            "2",             "--floatbv",
          "--unlimited-k-steps", "--memory-leak-check", "--context-bound",
          "2",                   "--timeout",     "300",
          "-Iincludes",          "-Inetworks"};
}

std::string VerifierConfig::Validate() const {
  if (binary_path.empty()) return "verifier binary path is empty";
  if (flags.empty()) return "verifier flags are empty";
  if (timeout_seconds <= 0) return "verifier timeout must be positive";
  return {};
}

VerifierOutcome ParseVerifierOutput(std::string_view raw, bool timed_out,
                                    double wall_seconds,
                                    const OutputProfile& profile) {
  VerifierOutcome outcome;
  outcome.raw_output = std::string(raw);
  outcome.wall_time_seconds = wall_seconds;
  for (const auto& marker : profile.timeout_markers) {
    if (!marker.empty() && raw.find(marker) != std::string_view::npos) {
      timed_out = true;
    }
  }
  const bool failed = raw.find(profile.failure_marker) != std::string_view::npos;
  const bool succeeded =
      raw.find(profile.success_marker) != std::string_view::npos;

  if (failed) {
    outcome.verdict = Verdict::kUnsafe;
    Block block = FindPropertyBlock(raw, profile.property_header);
    if (block.begin == std::string_view::npos) {
      // No property block: keep the failure line itself so the report is
      // never empty.
      std::size_t pos = raw.find(profile.failure_marker);
      block.begin = pos;
      block.end = pos + profile.failure_marker.size();
      outcome.diagnostic = "failure reported without a property block";
    }
    outcome.violated_property =
        TrimRight(raw.substr(block.begin, block.end - block.begin));
    std::size_t ce_begin = raw.find(profile.counterexample_header);
    if (ce_begin == std::string_view::npos || ce_begin > block.begin) {
      ce_begin = block.begin;
    }
    outcome.counterexample =
        TrimRight(raw.substr(ce_begin, block.end - ce_begin));
    outcome.fault_line = FirstLineNumber(outcome.violated_property);
    // The last line of the block names the failing check or expression.
    LineBuffer lines = LineBuffer::Split(outcome.violated_property);
    for (auto it = lines.lines.rbegin(); it != lines.lines.rend(); ++it) {
      std::string_view t = Trim(*it);
      if (!t.empty() && t != Trim(profile.property_header)) {
        outcome.fault_statement = std::string(t);
        break;
      }
    }
    return outcome;
  }
  if (succeeded && !timed_out) {
    outcome.verdict = Verdict::kSafe;
    return outcome;
  }
  outcome.verdict = Verdict::kUnknown;
  if (timed_out) {
    outcome.timed_out = true;
    outcome.diagnostic = "verifier timed out";
  } else {
    outcome.inconclusive = true;
    outcome.diagnostic =
        "MalformedOutput: no verdict marker in verifier output";
  }
  return outcome;
}

std::string ReduceFeedback(const VerifierOutcome& outcome, FeedbackKind kind) {
  if (outcome.verdict != Verdict::kUnsafe) {
    throw Error(ErrorCode::kNotUnsafe,
                "feedback requires an Unsafe outcome, got " +
                    std::string(VerdictName(outcome.verdict)));
  }
  switch (kind) {
    case FeedbackKind::kViolatedProperty: return outcome.violated_property;
    case FeedbackKind::kCounterexample: return outcome.counterexample;
    case FeedbackKind::kNone: break;
  }
  throw Error(ErrorCode::kMissingFeedback, "no feedback kind selected");
}

ProcessVerifier::ProcessVerifier(VerifierConfig config, OutputProfile profile)
    : config_(std::move(config)), profile_(std::move(profile)) {}

std::vector<std::string> ProcessVerifier::CommandLine(
    const std::filesystem::path& file) const {
  std::vector<std::string> argv = {config_.binary_path, file.string()};
  for (std::size_t i = 0; i < config_.flags.size(); ++i) {
    argv.push_back(config_.flags[i]);
    // Keep the tool's own limit in step with the harness limit.
    if (config_.flags[i] == "--timeout" && i + 1 < config_.flags.size() &&
        config_.timeout_seconds > 0) {
      argv.push_back(std::to_string(config_.timeout_seconds));
      ++i;
    }
  }
  for (const auto& dir : config_.include_dirs) {
    argv.push_back("-I" + std::filesystem::absolute(dir).string());
  }
  return argv;
}

VerifierOutcome ProcessVerifier::Verify(std::string_view source,
                                        std::string_view name_hint) {
  if (config_.timeout_seconds <= 0) {
    VerifierOutcome outcome;
    outcome.verdict = Verdict::kUnknown;
    outcome.timed_out = true;
    outcome.diagnostic = "timeout budget is zero; verifier not run";
    return outcome;
  }
  ScratchDirectory scratch("memfix-verify");
  const auto file = scratch.path() / SanitizeName(name_hint);
  WriteFile(file, source);
  const auto cwd =
      config_.working_dir.empty() ? scratch.path() : config_.working_dir;
  ProcessResult run =
      RunProcess(CommandLine(file), cwd,
                 std::chrono::seconds(config_.timeout_seconds),
                 std::chrono::seconds(std::max(config_.grace_seconds, 0)));
  if (!run.launched) {
    throw Error(ErrorCode::kBinaryNotFound,
                "cannot execute '" + config_.binary_path +
                    "': " + std::strerror(run.exec_errno));
  }
  VerifierOutcome outcome =
      ParseVerifierOutput(run.output, run.timed_out, run.wall_seconds, profile_);
  if (outcome.verdict == Verdict::kUnknown && config_.keep_artifacts) {
    WriteFile(scratch.path() / "verifier-output.txt", run.output);
    scratch.Keep();
    outcome.diagnostic += " (artifacts kept in " + scratch.path().string() + ")";
  }
  return outcome;
}

}  // namespace memfix
