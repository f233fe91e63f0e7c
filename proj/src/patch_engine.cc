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

#include "memfix/patch_engine.h"

#include <algorithm>
#include <array>
#include <bit>
#include <cerrno>
#include <cstdint>
#include <cstring>

#include "memfix/error.h"
#include "memfix/process.h"
#include "memfix/text.h"

namespace memfix {
namespace {

constexpr std::string_view kFence = "```";

std::string RightTrim(std::string_view s) {
  std::size_t end = s.size();
  while (end > 0 && (s[end - 1] == ' ' || s[end - 1] == '\t' ||
                     s[end - 1] == '\r' || s[end - 1] == '\n')) {
    --end;
  }
  return std::string(s.substr(0, end));
}

// Interior of the first fenced block, or npos-flag when there is none.
bool FirstFencedBlock(std::string_view reply, std::string* interior) {
  std::size_t open = reply.find(kFence);
  if (open == std::string_view::npos) return false;
  std::size_t after_open = open + kFence.size();
  std::size_t close_same_line = reply.find(kFence, after_open);
  std::size_t eol = reply.find('\n', after_open);
  if (close_same_line != std::string_view::npos &&
      (eol == std::string_view::npos || close_same_line < eol)) {
    // ```code``` on a single line.
    *interior = std::string(reply.substr(after_open, close_same_line - after_open));
    return true;
  }
  if (eol == std::string_view::npos) {
    *interior = std::string();
    return true;
  }
  std::size_t body = eol + 1;  // language tag line dropped
  std::size_t close = reply.find(kFence, body);
  std::string_view inside = close == std::string_view::npos
                                ? reply.substr(body)
                                : reply.substr(body, close - body);
  if (inside.ends_with('\n')) inside.remove_suffix(1);
  if (inside.ends_with('\r')) inside.remove_suffix(1);
  *interior = std::string(inside);
  return true;
}

}  // namespace

std::string ExtractCode(std::string_view reply, bool expect_single_line) {
  std::string candidate;
  if (!FirstFencedBlock(reply, &candidate)) {
    candidate = std::string(Trim(reply));
  }
  if (IsBlank(candidate)) {
    throw Error(ErrorCode::kEmptyReply, "reply contains no code");
  }
  if (expect_single_line) {
    for (const std::string& line : LineBuffer::Split(candidate).lines) {
      if (!IsBlank(line)) return RightTrim(line);
    }
  }
  return candidate;
}

std::string Splice(std::string_view original, const CodeWindow& window,
                   std::string_view replacement) {
  LineBuffer lines = LineBuffer::Split(original);
  const int n = static_cast<int>(lines.size());
  if (window.start_line < 1 || window.end_line > n ||
      window.start_line > window.end_line ||
      JoinLines(lines.lines, window.start_line - 1, window.end_line) !=
          window.text) {
    throw Error(ErrorCode::kWindowMismatch,
                "window " + std::to_string(window.start_line) + ".." +
                    std::to_string(window.end_line) +
                    " does not match the source");
  }
  if (replacement.ends_with('\n')) replacement.remove_suffix(1);
  std::vector<std::string> repl = LineBuffer::Split(replacement).lines;
  if (repl.empty()) repl.emplace_back();
  // A replacement that itself ended in '\n' was split with a trailing empty
  // line dropped by Split; nothing else to normalize.
  lines.lines.erase(lines.lines.begin() + (window.start_line - 1),
                    lines.lines.begin() + window.end_line);
  lines.lines.insert(lines.lines.begin() + (window.start_line - 1),
                     repl.begin(), repl.end());
  return lines.Join();
}

CompileResult ProcessCompileChecker::Check(std::string_view source) {
  ScratchDirectory scratch("memfix-cc");
  const auto file = scratch.path() / "candidate.c";
  WriteFile(file, source);
  std::vector<std::string> argv = {config_.compiler};
  argv.insert(argv.end(), config_.flags.begin(), config_.flags.end());
  for (const auto& dir : config_.include_dirs) {
    argv.push_back("-I" + std::filesystem::absolute(dir).string());
  }
  argv.push_back("-c");
  argv.push_back(file.string());
  argv.push_back("-o");
  argv.push_back((scratch.path() / "candidate.o").string());
  ProcessResult run = RunProcess(argv, scratch.path(),
                                 std::chrono::seconds(config_.timeout_seconds));
  if (!run.launched) {
    throw Error(ErrorCode::kCompilerNotFound,
                "cannot execute '" + config_.compiler +
                    "': " + std::strerror(run.exec_errno));
  }
  CompileResult result;
  result.ok = !run.timed_out && run.exit_code == 0;
  result.diagnostics = run.output;
  if (run.timed_out) result.diagnostics += "\n[compiler timed out]";
  result.wall_seconds = run.wall_seconds;
  return result;
}

std::size_t LcsLength(std::string_view a, std::string_view b) {
  if (a.size() < b.size()) std::swap(a, b);
  // Bit vectors over the shorter string.
  const std::size_t m = b.size();
  if (m == 0) return 0;
  const std::size_t words = (m + 63) / 64;
  std::vector<std::uint64_t> match(256 * words, 0);
  for (std::size_t i = 0; i < m; ++i) {
    match[static_cast<unsigned char>(b[i]) * words + i / 64] |=
        std::uint64_t{1} << (i % 64);
  }
  std::vector<std::uint64_t> v(words, ~std::uint64_t{0});
  for (char c : a) {
    const std::uint64_t* mc = &match[static_cast<unsigned char>(c) * words];
    std::uint64_t carry = 0;
    for (std::size_t w = 0; w < words; ++w) {
      const std::uint64_t u = v[w] & mc[w];
      const std::uint64_t sum = v[w] + u;
      const std::uint64_t sum_c = sum + carry;
      const std::uint64_t next_carry =
          (sum < v[w]) || (sum_c < sum) ? 1 : 0;
      v[w] = sum_c | (v[w] & ~mc[w]);
      carry = next_carry;
    }
  }
  std::size_t zeros = 0;
  for (std::size_t w = 0; w < words; ++w) {
    std::uint64_t word = v[w];
    if (w == words - 1 && m % 64 != 0) {
      word |= ~std::uint64_t{0} << (m % 64);
    }
    zeros += static_cast<std::size_t>(std::popcount(~word));
  }
  return zeros;
}

double RelevanceMatch(std::string_view input_code, std::string_view output_code) {
  const std::string a = StripWhitespace(input_code);
  const std::string b = StripWhitespace(output_code);
  if (a.empty() && b.empty()) return 1.0;
  if (a.empty() || b.empty()) return 0.0;
  return static_cast<double>(LcsLength(a, b)) /
         static_cast<double>(std::max(a.size(), b.size()));
}

}  // namespace memfix
