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

#include "memfix/prompt.h"

#include <algorithm>
#include <charconv>
#include <set>

#include "memfix/error.h"
#include "memfix/text.h"

namespace memfix {

// Generated from data/prompt_templates.txt at build time.
extern const char kEmbeddedPromptTemplates[];

namespace {

constexpr std::string_view kSourcePlaceholder = "{source}";
constexpr std::string_view kFeedbackPlaceholder = "{esbmc}";
constexpr std::string_view kRolePlaceholder = "{role}";
constexpr std::string_view kFence = "\n```\n";

bool Contains(std::string_view text, std::string_view needle) {
  return text.find(needle) != std::string_view::npos;
}

int FeedbackDigit(FeedbackKind kind) {
  switch (kind) {
    case FeedbackKind::kNone:
      return 0;
    case FeedbackKind::kViolatedProperty:
      return 1;
    case FeedbackKind::kCounterexample:
      return 2;
  }
  return 0;
}

std::string Fenced(std::string_view text, bool backticks) {
  if (!backticks) return std::string(text);
  std::string out;
  out.reserve(text.size() + 2 * kFence.size());
  out.append(kFence).append(text).append(kFence);
  return out;
}

// Single left-to-right pass so that substituted text is never rescanned.
std::string Substitute(std::string_view text, std::string_view source,
                       std::string_view feedback, std::string_view role) {
  std::string out;
  out.reserve(text.size() + source.size() + feedback.size());
  std::size_t i = 0;
  while (i < text.size()) {
    if (text[i] == '{') {
      std::string_view rest = text.substr(i);
      if (rest.starts_with(kSourcePlaceholder)) {
        out.append(source);
        i += kSourcePlaceholder.size();
        continue;
      }
      if (rest.starts_with(kFeedbackPlaceholder)) {
        out.append(feedback);
        i += kFeedbackPlaceholder.size();
        continue;
      }
      if (rest.starts_with(kRolePlaceholder)) {
        out.append(role);
        i += kRolePlaceholder.size();
        continue;
      }
    }
    out.push_back(text[i++]);
  }
  return out;
}

void CheckTemplate(const PromptTemplate& t) {
  auto fail = [&](const std::string& why) {
    throw Error(ErrorCode::kConfigError,
                "prompt template '" + t.label + "': " + why);
  };
  if (!Contains(t.text, kSourcePlaceholder)) fail("missing {source}");
  if (Contains(t.text, kFeedbackPlaceholder) != t.requires_feedback()) {
    fail("{esbmc} placeholder disagrees with the feedback setting");
  }
  if (Contains(t.text, kRolePlaceholder) != t.requires_role()) {
    fail("{role} placeholder disagrees with the family");
  }
  if (t.requires_feedback()) {
    const bool before =
        t.text.find(kFeedbackPlaceholder) < t.text.find(kSourcePlaceholder);
    if (before != (t.feedback_position == FeedbackPosition::kBeforeSource)) {
      fail("feedback position disagrees with the placeholder order");
    }
  }
}

}  // namespace

std::string_view TemplateFamilyName(TemplateFamily family) {
  switch (family) {
    case TemplateFamily::kOld:
      return "old";
    case TemplateFamily::kSimple:
      return "simple";
    case TemplateFamily::kPersona:
      return "persona";
  }
  return "simple";
}

std::string_view FeedbackPositionName(FeedbackPosition position) {
  switch (position) {
    case FeedbackPosition::kNone:
      return "none";
    case FeedbackPosition::kBeforeSource:
      return "before";
    case FeedbackPosition::kAfterSource:
      return "after";
  }
  return "none";
}

std::string_view SourceStrategyName(SourceStrategy strategy) {
  return strategy == SourceStrategy::kContextual ? "contextual" : "one-line";
}

TemplateFamily ParseTemplateFamily(std::string_view name) {
  if (name == "old") return TemplateFamily::kOld;
  if (name == "simple") return TemplateFamily::kSimple;
  if (name == "persona") return TemplateFamily::kPersona;
  throw Error(ErrorCode::kConfigError,
              "unknown template family '" + std::string(name) + "'");
}

FeedbackPosition ParseFeedbackPosition(std::string_view name) {
  if (name == "none") return FeedbackPosition::kNone;
  if (name == "before") return FeedbackPosition::kBeforeSource;
  if (name == "after") return FeedbackPosition::kAfterSource;
  throw Error(ErrorCode::kConfigError,
              "unknown feedback position '" + std::string(name) + "'");
}

SourceStrategy ParseSourceStrategy(std::string_view name) {
  if (name == "contextual") return SourceStrategy::kContextual;
  if (name == "one-line" || name == "oneline") return SourceStrategy::kOneLine;
  throw Error(ErrorCode::kConfigError,
              "unknown source strategy '" + std::string(name) + "'");
}

std::string PromptSpec::Id(const PromptLibrary& library) const {
  return library.Get(template_id).label + "." +
         std::to_string(role_index.value_or(0)) + "." +
         std::to_string(FeedbackDigit(feedback_kind));
}

std::string PromptSpec::Key(const PromptLibrary& library) const {
  return Id(library) + "/" + std::string(SourceStrategyName(source_strategy)) +
         "/" + (backticks ? "bt" : "nobt");
}

const PromptLibrary& PromptLibrary::Default() {
  static const PromptLibrary library = Parse(kEmbeddedPromptTemplates);
  return library;
}

PromptLibrary PromptLibrary::Parse(std::string_view text) {
  PromptLibrary library;
  PromptTemplate current;
  bool open = false;
  std::set<std::string> seen_keys;
  int line_number = 0;

  auto finish = [&] {
    if (!open) return;
    for (const char* key : {"id", "family", "feedback", "text"}) {
      if (!seen_keys.contains(key)) {
        throw Error(ErrorCode::kConfigError, "prompt template '" +
                                                 current.label + "' lacks '" +
                                                 key + "'");
      }
    }
    CheckTemplate(current);
    for (const PromptTemplate& t : library.templates_) {
      if (t.id == current.id || t.label == current.label) {
        throw Error(ErrorCode::kConfigError,
                    "duplicate prompt template '" + current.label + "'");
      }
    }
    library.templates_.push_back(std::move(current));
    current = PromptTemplate();
    seen_keys.clear();
    open = false;
  };

  for (const std::string& raw : LineBuffer::Split(text).lines) {
    ++line_number;
    std::string_view line = Trim(raw);
    if (line.empty() || line.front() == '#') continue;
    if (line.front() == '[') {
      if (line.back() != ']' || line.size() < 3) {
        throw Error(ErrorCode::kConfigError,
                    "templates line " + std::to_string(line_number) +
                        ": malformed header");
      }
      finish();
      current.label = std::string(line.substr(1, line.size() - 2));
      open = true;
      continue;
    }
    const std::size_t eq = line.find('=');
    if (!open || eq == std::string_view::npos) {
      throw Error(ErrorCode::kConfigError,
                  "templates line " + std::to_string(line_number) +
                      ": expected 'key = value' inside a [label] block");
    }
    const std::string key(Trim(line.substr(0, eq)));
    const std::string_view value = Trim(line.substr(eq + 1));
    if (key == "id") {
      auto [ptr, ec] =
          std::from_chars(value.data(), value.data() + value.size(), current.id);
      if (ec != std::errc() || ptr != value.data() + value.size()) {
        throw Error(ErrorCode::kConfigError,
                    "templates line " + std::to_string(line_number) +
                        ": id must be an integer");
      }
    } else if (key == "family") {
      current.family = ParseTemplateFamily(value);
    } else if (key == "feedback") {
      current.feedback_position = ParseFeedbackPosition(value);
    } else if (key == "text") {
      current.text = std::string(value);
    } else {
      throw Error(ErrorCode::kConfigError, "templates line " +
                                               std::to_string(line_number) +
                                               ": unknown key '" + key + "'");
    }
    seen_keys.insert(key);
  }
  finish();
  std::sort(library.templates_.begin(), library.templates_.end(),
            [](const PromptTemplate& a, const PromptTemplate& b) {
              return a.id < b.id;
            });
  return library;
}

PromptLibrary PromptLibrary::LoadFile(const std::filesystem::path& path) {
  return Parse(ReadFile(path));
}

const PromptTemplate& PromptLibrary::Get(int template_id) const {
  for (const PromptTemplate& t : templates_) {
    if (t.id == template_id) return t;
  }
  throw Error(ErrorCode::kUnknownTemplate,
              "no prompt template with id " + std::to_string(template_id));
}

const PromptTemplate& PromptLibrary::GetByLabel(std::string_view label) const {
  for (const PromptTemplate& t : templates_) {
    if (t.label == label) return t;
  }
  throw Error(ErrorCode::kUnknownTemplate,
              "no prompt template labelled '" + std::string(label) + "'");
}

void PromptLibrary::Validate(const PromptSpec& spec) const {
  const PromptTemplate& t = Get(spec.template_id);
  auto fail = [&](const std::string& why) {
    throw Error(ErrorCode::kInvalidPromptSpec,
                "template '" + t.label + "': " + why);
  };
  if ((spec.feedback_kind == FeedbackKind::kNone) !=
      (spec.feedback_position == FeedbackPosition::kNone)) {
    fail("feedback kind and position must both be set or both be none");
  }
  if (spec.feedback_position != t.feedback_position) {
    fail("feedback position must be '" +
         std::string(FeedbackPositionName(t.feedback_position)) + "'");
  }
  if (t.requires_role()) {
    if (!spec.role_index || *spec.role_index < 0 ||
        *spec.role_index >= static_cast<int>(kRoles.size())) {
      fail("persona templates need a role index in 0..5");
    }
  } else if (spec.role_index) {
    fail("only persona templates take a role");
  }
}

std::string PromptLibrary::Render(const PromptSpec& spec,
                                  std::string_view window_text,
                                  std::optional<std::string_view> feedback) const {
  const PromptTemplate& t = Get(spec.template_id);
  const bool wants = spec.feedback_kind != FeedbackKind::kNone;
  if (feedback.has_value() != wants || t.requires_feedback() != wants) {
    throw Error(ErrorCode::kMissingFeedback,
                "template '" + t.label + "' " +
                    (t.requires_feedback() ? "needs" : "takes no") +
                    " verifier feedback, spec feedback is " +
                    std::string(FeedbackKindName(spec.feedback_kind)) +
                    (feedback ? ", feedback given" : ", none given"));
  }
  std::string_view role;
  if (t.requires_role()) {
    Validate(spec);
    role = kRoles[static_cast<std::size_t>(*spec.role_index)];
  }
  return Substitute(t.text, Fenced(window_text, spec.backticks),
                    feedback ? Fenced(*feedback, spec.backticks) : std::string(),
                    role);
}

std::vector<PromptSpec> PromptLibrary::EnumerateAll(
    const EnumerateOptions& options) const {
  std::vector<PromptSpec> specs;
  for (SourceStrategy strategy : options.source_strategies) {
    for (int id : options.template_ids) {
      const PromptTemplate& t = Get(id);
      std::vector<std::optional<int>> roles;
      if (t.requires_role()) {
        roles.assign(options.role_indices.begin(), options.role_indices.end());
      } else {
        roles.push_back(std::nullopt);
      }
      std::vector<FeedbackKind> kinds =
          t.requires_feedback() ? options.feedback_kinds
                                : std::vector<FeedbackKind>{FeedbackKind::kNone};
      for (const auto& role : roles) {
        for (FeedbackKind kind : kinds) {
          specs.push_back(
              MakeSpec(*this, id, role, kind, strategy, options.backticks));
        }
      }
    }
  }
  return specs;
}

FitResult PromptLibrary::FitToContext(const PromptSpec& spec,
                                      std::string_view source, int fault_line,
                                      std::optional<std::string_view> feedback,
                                      std::size_t token_budget,
                                      const TokenEstimator& estimator) const {
  auto tokens = [&](const std::string& prompt) {
    return estimator ? estimator(prompt) : EstimateTokens(prompt);
  };
  auto attempt = [&](const CodeWindow& window,
                     std::optional<std::string_view> fb) -> FitResult {
    FitResult r;
    r.window = window;
    if (fb) r.feedback = std::string(*fb);
    r.prompt = Render(spec, window.text, fb);
    r.tokens = tokens(r.prompt);
    return r;
  };

  CodeWindow smallest;
  if (spec.source_strategy == SourceStrategy::kOneLine) {
    smallest = OneLineWindow(source, fault_line);
    FitResult r = attempt(smallest, feedback);
    if (r.tokens <= token_budget) return r;
  } else {
    const int n = CountLines(source);
    FitResult whole = attempt(ContextualWindow(source, fault_line, n), feedback);
    if (whole.tokens <= token_budget) return whole;
    smallest = ContextualWindow(source, fault_line, 1);
    FitResult best = attempt(smallest, feedback);
    if (best.tokens <= token_budget) {
      int lo = 1;      // fits
      int hi = n;      // does not fit
      while (hi - lo > 1) {
        const int mid = lo + (hi - lo) / 2;
        FitResult r = attempt(ContextualWindow(source, fault_line, mid), feedback);
        if (r.tokens <= token_budget) {
          lo = mid;
          best = std::move(r);
        } else {
          hi = mid;
        }
      }
      return best;
    }
  }

  // Even the smallest window is too large: shorten the feedback from its end.
  if (feedback && !feedback->empty()) {
    std::size_t lo = 0;
    std::size_t hi = feedback->size();  // full length known not to fit
    if (attempt(smallest, feedback->substr(0, 0)).tokens <= token_budget) {
      while (hi - lo > 1) {
        const std::size_t mid = lo + (hi - lo) / 2;
        if (attempt(smallest, feedback->substr(0, mid)).tokens <= token_budget) {
          lo = mid;
        } else {
          hi = mid;
        }
      }
      FitResult r = attempt(smallest, feedback->substr(0, lo));
      r.feedback_truncated = true;
      return r;
    }
  }
  throw Error(ErrorCode::kBudgetTooSmall,
              "a " + std::to_string(token_budget) +
                  "-token budget cannot hold one source line and the template");
}

PromptSpec MakeSpec(const PromptLibrary& library, int template_id,
                    std::optional<int> role_index, FeedbackKind feedback_kind,
                    SourceStrategy strategy, bool backticks) {
  const PromptTemplate& t = library.Get(template_id);
  PromptSpec spec;
  spec.template_id = template_id;
  spec.role_index = role_index;
  spec.feedback_kind = feedback_kind;
  spec.feedback_position = feedback_kind == FeedbackKind::kNone
                               ? FeedbackPosition::kNone
                               : t.feedback_position;
  spec.source_strategy = strategy;
  spec.backticks = backticks;
  library.Validate(spec);
  return spec;
}

}  // namespace memfix
