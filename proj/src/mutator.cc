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

#include "memfix/mutator.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <optional>

#include "memfix/error.h"
#include "memfix/lexer.h"
#include "memfix/text.h"

namespace memfix {
namespace {

struct Edit {
  MutationKind kind;
  std::size_t offset;
  std::size_t length;
  std::string replacement;
  int line;
  int column;
};

bool IsPunct(const Token* t, std::string_view text) {
  return t != nullptr && t->kind == TokenKind::kPunctuator && t->text == text;
}

bool IsOperand(const Token& t) {
  switch (t.kind) {
    case TokenKind::kIdentifier: return !IsCKeyword(t.text);
    case TokenKind::kNumber:
    case TokenKind::kString:
    case TokenKind::kCharLiteral: return true;
    default: return t.text == ")" || t.text == "]";
  }
}

// Index of the '(' matching the ')' at `close`, or npos.
std::size_t MatchingOpen(const std::vector<Token>& tokens, std::size_t close) {
  int depth = 0;
  for (std::size_t i = close + 1; i-- > 0;) {
    if (tokens[i].text == ")") ++depth;
    if (tokens[i].text == "(" && --depth == 0) return i;
  }
  return std::string_view::npos;
}

// `(float)` or `(unsigned int *)`.
bool IsCast(const std::vector<Token>& tokens, std::size_t close) {
  std::size_t open = MatchingOpen(tokens, close);
  if (open == std::string_view::npos || open + 1 == close) return false;
  for (std::size_t i = open + 1; i < close; ++i) {
    const Token& t = tokens[i];
    if (t.kind == TokenKind::kIdentifier && IsCKeyword(t.text) &&
        t.text != "sizeof") {
      continue;
    }
    if (t.text == "*") continue;
    return false;
  }
  return true;
}

bool IsBinaryOperator(const std::vector<Token>& tokens, std::size_t i) {
  if (i == 0 || i + 1 >= tokens.size()) return false;
  const Token& prev = tokens[i - 1];
  if (!IsOperand(prev)) return false;
  if (prev.text == ")" && IsCast(tokens, i - 1)) return false;
  if (tokens[i].text == "*" && prev.kind == TokenKind::kIdentifier) {
    // `T *x = ...;` / `(T *x, ...)` declarations with a typedef'd T.
    const Token* before = i >= 2 ? &tokens[i - 2] : nullptr;
    const Token* after = i + 2 < tokens.size() ? &tokens[i + 2] : nullptr;
    const bool decl_start = before == nullptr || IsPunct(before, ";") ||
                            IsPunct(before, "{") || IsPunct(before, "}") ||
                            IsPunct(before, "(") || IsPunct(before, ",");
    const bool decl_end = after == nullptr || IsPunct(after, "=") ||
                          IsPunct(after, ";") || IsPunct(after, ",") ||
                          IsPunct(after, ")") || IsPunct(after, "[");
    if (decl_start && tokens[i + 1].kind == TokenKind::kIdentifier && decl_end) {
      return false;
    }
  }
  return true;
}

// Decimal integer literal with optional u/l suffixes; returns the digits.
std::optional<std::string_view> DecimalDigits(std::string_view text) {
  std::size_t n = 0;
  while (n < text.size() && std::isdigit(static_cast<unsigned char>(text[n]))) ++n;
  if (n == 0) return std::nullopt;
  if (n > 1 && text[0] == '0') return std::nullopt;  // octal
  for (std::size_t i = n; i < text.size(); ++i) {
    char c = static_cast<char>(std::tolower(static_cast<unsigned char>(text[i])));
    if (c != 'u' && c != 'l') return std::nullopt;
  }
  return text.substr(0, n);
}

std::string Increment(std::string_view digits) {
  std::string s(digits);
  int i = static_cast<int>(s.size()) - 1;
  while (i >= 0 && s[i] == '9') s[i--] = '0';
  if (i < 0) {
    s.insert(s.begin(), '1');
  } else {
    ++s[i];
  }
  return s;
}

std::string_view RelationalSwap(std::string_view op) {
  if (op == "<") return "<=";
  if (op == "<=") return "<";
  if (op == ">") return ">=";
  if (op == ">=") return ">";
  if (op == "==") return "!=";
  if (op == "!=") return "==";
  return {};
}

std::string_view ArithmeticSwap(std::string_view op) {
  if (op == "+") return "-";
  if (op == "-") return "+";
  if (op == "*") return "/";
  if (op == "/") return "*";
  return {};
}

std::vector<Edit> FindEdits(std::string_view source, const MutationConfig& config) {
  const std::vector<Token> tokens = LexCode(source);
  std::vector<Edit> edits;
  std::vector<std::string_view> brackets;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const Token& t = tokens[i];
    if (t.kind == TokenKind::kPunctuator) {
      if (t.text == "(" || t.text == "[" || t.text == "{") {
        brackets.push_back(t.text);
      } else if ((t.text == ")" || t.text == "]" || t.text == "}") &&
                 !brackets.empty()) {
        brackets.pop_back();
      }
    }
    if (config.Enabled(MutationKind::kRelationalReplace) &&
        t.kind == TokenKind::kPunctuator) {
      std::string_view swap = RelationalSwap(t.text);
      if (!swap.empty()) {
        edits.push_back({MutationKind::kRelationalReplace, t.offset,
                         t.text.size(), std::string(swap), t.line, t.column});
      }
    }
    if (config.Enabled(MutationKind::kArithmeticReplace) &&
        t.kind == TokenKind::kPunctuator) {
      std::string_view swap = ArithmeticSwap(t.text);
      if (!swap.empty() && IsBinaryOperator(tokens, i)) {
        edits.push_back({MutationKind::kArithmeticReplace, t.offset,
                         t.text.size(), std::string(swap), t.line, t.column});
      }
    }
    if (config.Enabled(MutationKind::kIndexShift) &&
        t.kind == TokenKind::kNumber && !brackets.empty() &&
        brackets.back() == "[") {
      if (auto digits = DecimalDigits(t.text)) {
        std::string replacement =
            Increment(*digits) + std::string(t.text.substr(digits->size()));
        edits.push_back({MutationKind::kIndexShift, t.offset, t.text.size(),
                         replacement, t.line, t.column});
      }
    }
    if (config.Enabled(MutationKind::kCallRemoval) &&
        t.kind == TokenKind::kIdentifier &&
        std::find(config.removable_calls.begin(), config.removable_calls.end(),
                  t.text) != config.removable_calls.end() &&
        i + 1 < tokens.size() && tokens[i + 1].text == "(") {
      const Token* prev = i > 0 ? &tokens[i - 1] : nullptr;
      const bool statement_start = prev == nullptr || IsPunct(prev, ";") ||
                                   IsPunct(prev, "{") || IsPunct(prev, "}");
      if (!statement_start) continue;
      int depth = 0;
      std::size_t close = i + 1;
      for (; close < tokens.size(); ++close) {
        if (tokens[close].text == "(") ++depth;
        if (tokens[close].text == ")" && --depth == 0) break;
      }
      if (close + 1 < tokens.size() && tokens[close + 1].text == ";") {
        const Token& semi = tokens[close + 1];
        edits.push_back({MutationKind::kCallRemoval, t.offset,
                         semi.offset + 1 - t.offset, std::string(), t.line,
                         t.column});
      }
    }
  }
  return edits;
}

PatchFile MakePatch(std::string_view source, const LineBuffer& base,
                    const Edit& edit, int context_lines) {
  std::string mutated(source);
  mutated.replace(edit.offset, edit.length, edit.replacement);
  const int first_line = edit.line;  // 1-based
  int last_line = first_line;
  for (std::size_t k = edit.offset; k < edit.offset + edit.length; ++k) {
    if (source[k] == '\n') ++last_line;
  }
  // Lines [first_line, last_line] of the base become the corresponding
  // stretch of the mutated text.
  std::size_t begin = edit.offset;
  while (begin > 0 && source[begin - 1] != '\n') --begin;
  std::size_t end_in_mutated = edit.offset + edit.replacement.size();
  while (end_in_mutated < mutated.size() && mutated[end_in_mutated] != '\n') {
    ++end_in_mutated;
  }

  PatchHunk hunk;
  hunk.anchor_line = first_line;
  for (int l = first_line; l <= last_line; ++l) hunk.removed.push_back(base.lines[l - 1]);
  hunk.added = LineBuffer::Split(
                   std::string_view(mutated).substr(begin, end_in_mutated - begin))
                   .lines;
  if (hunk.added.empty()) hunk.added.push_back("");
  const int ctx_begin = std::max(1, first_line - context_lines);
  for (int l = ctx_begin; l < first_line; ++l) {
    hunk.context_before.push_back(base.lines[l - 1]);
  }
  const int ctx_end =
      std::min(static_cast<int>(base.size()), last_line + context_lines);
  for (int l = last_line + 1; l <= ctx_end; ++l) {
    hunk.context_after.push_back(base.lines[l - 1]);
  }

  PatchFile patch;
  patch.id = std::string(MutationKindName(edit.kind)) + "-" +
             std::to_string(edit.line) + "-" + std::to_string(edit.column);
  patch.hunks.push_back(std::move(hunk));
  return patch;
}

Sample MakeMutant(const Sample& base, const PatchFile& patch) {
  Sample mutant;
  mutant.id = base.id + "." + patch.id;
  mutant.category = base.category;
  mutant.base_path = base.base_path;
  mutant.base_name = base.base_name;
  mutant.mutation_id = patch.id;
  mutant.source_text = ApplyPatch(base.source_text, patch);
  mutant.label = Label::kUnlabeled;
  return mutant;
}

}  // namespace

std::string_view MutationKindName(MutationKind kind) {
  switch (kind) {
    case MutationKind::kRelationalReplace: return "RelationalReplace";
    case MutationKind::kArithmeticReplace: return "ArithmeticReplace";
    case MutationKind::kIndexShift: return "IndexShift";
    case MutationKind::kCallRemoval: return "CallRemoval";
  }
  return "Unknown";
}

MutationKind ParseMutationKind(std::string_view name) {
  for (MutationKind k :
       {MutationKind::kRelationalReplace, MutationKind::kArithmeticReplace,
        MutationKind::kIndexShift, MutationKind::kCallRemoval}) {
    if (MutationKindName(k) == name) return k;
  }
  throw Error(ErrorCode::kConfigError,
              "unknown mutation operator '" + std::string(name) + "'");
}

bool MutationConfig::Enabled(MutationKind kind) const {
  return std::any_of(operators.begin(), operators.end(),
                     [&](const MutationOperator& op) {
                       return op.kind == kind && op.enabled;
                     });
}

std::vector<PatchFile> EnumerateMutations(std::string_view source,
                                          const MutationConfig& config) {
  const LineBuffer base = LineBuffer::Split(source);
  std::vector<PatchFile> patches;
  for (const Edit& edit : FindEdits(source, config)) {
    patches.push_back(MakePatch(source, base, edit, config.context_lines));
  }
  return patches;
}

std::vector<Sample> Expand(const std::vector<Sample>& corpus,
                           const MutationConfig& config) {
  std::vector<Sample> out;
  for (const Sample& base : corpus) {
    for (const PatchFile& patch : EnumerateMutations(base.source_text, config)) {
      try {
        out.push_back(MakeMutant(base, patch));
      } catch (const Error& e) {
        throw Error(ErrorCode::kInternal,
                    "self-generated patch failed to apply: " +
                        std::string(e.what()));
      }
    }
  }
  return out;
}

std::vector<Sample> ExpandFromPatchDirectory(
    const std::vector<Sample>& corpus, const std::filesystem::path& patch_root) {
  namespace fs = std::filesystem;
  std::vector<Sample> out;
  for (const Sample& base : corpus) {
    const fs::path dir = patch_root / base.base_name;
    if (!fs::is_directory(dir)) continue;
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
      const auto ext = entry.path().extension();
      if (entry.is_regular_file() && (ext == ".patch" || ext == ".diff")) {
        files.push_back(entry.path());
      }
    }
    std::sort(files.begin(), files.end());
    for (const fs::path& file : files) {
      PatchFile patch = ParseUnifiedDiff(ReadFile(file), file.stem().string());
      out.push_back(MakeMutant(base, patch));
    }
  }
  return out;
}

}  // namespace memfix
