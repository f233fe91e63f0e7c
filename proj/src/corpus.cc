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

#include "memfix/corpus.h"

#include <algorithm>
#include <unordered_set>

#include "memfix/error.h"
#include "memfix/lexer.h"
#include "memfix/text.h"

namespace memfix {
namespace {

struct Range {
  std::size_t begin;
  std::size_t end;
};

bool IsIntrinsic(std::string_view word) {
  return word == "__VERIFIER_assume" || word == "__VERIFIER_assert";
}

bool StartsStatement(const Token* prev) {
  if (prev == nullptr) return true;
  if (prev->kind != TokenKind::kPunctuator) return false;
  return prev->text == ";" || prev->text == "{" || prev->text == "}";
}

// Grows a deletion so that a line emptied by it disappears with its newline.
Range ExtendToLine(std::string_view text, Range r) {
  std::size_t end = r.end;
  while (end < text.size() && (text[end] == ' ' || text[end] == '\t')) ++end;
  std::size_t line_begin = r.begin;
  while (line_begin > 0 && text[line_begin - 1] != '\n') --line_begin;
  const bool blank_before = IsBlank(text.substr(line_begin, r.begin - line_begin));
  std::size_t line_end = end;
  while (line_end < text.size() && text[line_end] != '\n') ++line_end;
  const bool blank_after = IsBlank(text.substr(end, line_end - end));
  if (blank_before && blank_after) {
    return {line_begin, line_end < text.size() ? line_end + 1 : line_end};
  }
  return {r.begin, end};
}

}  // namespace

std::string_view CategoryName(Category category) {
  switch (category) {
    case Category::kHopfieldNets: return "hopfield_nets";
    case Category::kPolyApprox: return "poly_approx";
    case Category::kReachProbDensity: return "reach_prob_density";
    case Category::kReinforcementLearning: return "reinforcement_learning";
    case Category::kOther: return "other";
  }
  return "other";
}

Category ParseCategory(std::string_view name) {
  for (Category c : {Category::kHopfieldNets, Category::kPolyApprox,
                     Category::kReachProbDensity,
                     Category::kReinforcementLearning}) {
    if (CategoryName(c) == name) return c;
  }
  return Category::kOther;
}

std::string_view LabelName(Label label) {
  switch (label) {
    case Label::kUnlabeled: return "Unlabeled";
    case Label::kSafe: return "Safe";
    case Label::kUnsafe: return "Unsafe";
    case Label::kUnknown: return "Unknown";
  }
  return "Unlabeled";
}

Label ParseLabel(std::string_view name) {
  if (name == "Safe") return Label::kSafe;
  if (name == "Unsafe") return Label::kUnsafe;
  if (name == "Unknown") return Label::kUnknown;
  if (name == "Unlabeled" || name.empty()) return Label::kUnlabeled;
  throw Error(ErrorCode::kConfigError, "unknown label '" + std::string(name) + "'");
}

std::string StripVerifierIntrinsics(std::string_view source,
                                    std::vector<std::string>* warnings) {
  const std::vector<Token> tokens = LexCode(source);
  std::vector<Range> deletions;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const Token& tok = tokens[i];
    if (tok.kind != TokenKind::kIdentifier || !IsIntrinsic(tok.text)) continue;
    const Token* prev = i > 0 ? &tokens[i - 1] : nullptr;
    // `extern void __VERIFIER_assume(int);` declares, it does not call.
    if (prev != nullptr && prev->kind == TokenKind::kIdentifier &&
        prev->text != "else" && prev->text != "do" && prev->text != "return") {
      continue;
    }
    bool removable = StartsStatement(prev) && i + 1 < tokens.size() &&
                     tokens[i + 1].text == "(";
    std::size_t close = i + 1;
    if (removable) {
      int depth = 0;
      for (; close < tokens.size(); ++close) {
        if (tokens[close].text == "(") ++depth;
        if (tokens[close].text == ")" && --depth == 0) break;
      }
      removable = close + 1 < tokens.size() && tokens[close + 1].text == ";";
    }
    if (!removable) {
      if (warnings != nullptr) {
        warnings->push_back("line " + std::to_string(tok.line) + ": " +
                            std::string(tok.text) +
                            " is not a standalone statement; left in place");
      }
      continue;
    }
    const Token& semi = tokens[close + 1];
    deletions.push_back(
        ExtendToLine(source, {tok.offset, semi.offset + semi.text.size()}));
    i = close + 1;
  }
  std::string out(source);
  for (auto it = deletions.rbegin(); it != deletions.rend(); ++it) {
    out.erase(it->begin, it->end - it->begin);
  }
  return out;
}

std::vector<Sample> Dedupe(const std::vector<Sample>& samples) {
  std::unordered_set<std::string> seen;
  std::vector<Sample> out;
  for (const Sample& s : samples) {
    if (seen.insert(StripWhitespace(s.source_text)).second) out.push_back(s);
  }
  return out;
}

SeedCorpus LoadSeedCorpus(const std::filesystem::path& seed_root) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(seed_root)) {
    throw Error(ErrorCode::kIoError,
                "seed corpus directory not found: " + seed_root.string());
  }
  std::vector<fs::path> files;
  for (auto it = fs::recursive_directory_iterator(seed_root);
       it != fs::recursive_directory_iterator(); ++it) {
    if (it.depth() == 0 && it->is_directory()) {
      const auto name = it->path().filename().string();
      if (name == "includes" || name == "networks") {
        it.disable_recursion_pending();
        continue;
      }
    }
    if (it->is_regular_file() && it->path().extension() == ".c") {
      files.push_back(it->path());
    }
  }
  std::sort(files.begin(), files.end());

  SeedCorpus corpus;
  std::vector<Sample> raw;
  for (const fs::path& file : files) {
    const fs::path rel = fs::relative(file, seed_root);
    Sample s;
    s.category = rel.has_parent_path()
                     ? ParseCategory(rel.begin()->string())
                     : Category::kOther;
    s.base_name = file.stem().string();
    s.id = std::string(CategoryName(s.category)) + "." + s.base_name;
    std::vector<std::string> warnings;
    s.source_text = StripVerifierIntrinsics(ReadFile(file), &warnings);
    for (auto& w : warnings) corpus.warnings.push_back(rel.string() + ": " + w);
    if (IsBlank(s.source_text)) {
      corpus.warnings.push_back(rel.string() + ": empty after stripping; skipped");
      continue;
    }
    s.base_path = rel.string();
    raw.push_back(std::move(s));
  }
  corpus.files_read = files.size();
  // Ids must be unique; disambiguate same-named bases in one category.
  std::unordered_set<std::string> ids;
  for (Sample& s : raw) {
    std::string id = s.id;
    for (int n = 2; !ids.insert(id).second; ++n) id = s.id + "_" + std::to_string(n);
    s.id = id;
    s.base_name = id.substr(id.find('.') + 1);
  }
  corpus.samples = Dedupe(raw);
  return corpus;
}

}  // namespace memfix
