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

#include "memfix/patch.h"

#include <algorithm>
#include <charconv>
#include <sstream>

#include "memfix/error.h"
#include "memfix/text.h"

namespace memfix {
namespace {

void CheckOrdering(const PatchFile& patch) {
  for (std::size_t i = 1; i < patch.hunks.size(); ++i) {
    const PatchHunk& prev = patch.hunks[i - 1];
    const PatchHunk& cur = patch.hunks[i];
    const int prev_end = prev.anchor_line + static_cast<int>(prev.removed.size());
    if (cur.anchor_line <= prev.anchor_line || cur.anchor_line < prev_end) {
      throw Error(ErrorCode::kOverlappingHunks,
                  "hunk at line " + std::to_string(cur.anchor_line) +
                      " overlaps or precedes hunk at line " +
                      std::to_string(prev.anchor_line) + " in patch " +
                      patch.id);
    }
  }
}

bool RangeMatches(const std::vector<std::string>& lines, long first,
                  const std::vector<std::string>& expected) {
  if (first < 0) return false;
  if (first + static_cast<long>(expected.size()) >
      static_cast<long>(lines.size())) {
    return false;
  }
  for (std::size_t i = 0; i < expected.size(); ++i) {
    if (lines[first + i] != expected[i]) return false;
  }
  return true;
}

int ParseInt(std::string_view s, std::size_t& pos) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(s.data() + pos, s.data() + s.size(), value);
  if (ec != std::errc()) {
    throw Error(ErrorCode::kMalformedPatch,
                "expected a number in hunk header: " + std::string(s));
  }
  pos = ptr - s.data();
  return value;
}

// Parses "-a,b" or "-a" starting at pos (sign char included).
std::pair<int, int> ParseRange(std::string_view header, std::size_t& pos) {
  ++pos;  // sign
  int start = ParseInt(header, pos);
  int length = 1;
  if (pos < header.size() && header[pos] == ',') {
    ++pos;
    length = ParseInt(header, pos);
  }
  return {start, length};
}

}  // namespace

std::string ApplyPatch(std::string_view base, const PatchFile& patch) {
  CheckOrdering(patch);
  LineBuffer in = LineBuffer::Split(base);
  LineBuffer out;
  out.trailing_newline = in.trailing_newline;
  std::size_t cursor = 0;  // next base line (0-based) not yet copied
  for (const PatchHunk& hunk : patch.hunks) {
    const long first = hunk.anchor_line - 1;
    if (first < 0 || first > static_cast<long>(in.size()) ||
        !RangeMatches(in.lines, first, hunk.removed) ||
        !RangeMatches(in.lines,
                      first - static_cast<long>(hunk.context_before.size()),
                      hunk.context_before) ||
        !RangeMatches(in.lines, first + static_cast<long>(hunk.removed.size()),
                      hunk.context_after)) {
      throw Error(ErrorCode::kContextMismatch,
                  "patch " + patch.id + " does not match target at line " +
                      std::to_string(hunk.anchor_line));
    }
    for (; cursor < static_cast<std::size_t>(first); ++cursor) {
      out.lines.push_back(in.lines[cursor]);
    }
    out.lines.insert(out.lines.end(), hunk.added.begin(), hunk.added.end());
    cursor += hunk.removed.size();
  }
  for (; cursor < in.size(); ++cursor) out.lines.push_back(in.lines[cursor]);
  if (out.lines.empty()) out.trailing_newline = false;
  return out.Join();
}

PatchFile InvertPatch(const PatchFile& patch) {
  CheckOrdering(patch);
  PatchFile inverse;
  inverse.id = patch.id.empty() ? std::string() : patch.id + "-inverse";
  inverse.target = patch.target;
  int delta = 0;
  for (std::size_t i = 0; i < patch.hunks.size(); ++i) {
    const PatchHunk& hunk = patch.hunks[i];
    PatchHunk inv;
    inv.removed = hunk.added;
    inv.added = hunk.removed;
    inv.anchor_line = hunk.anchor_line + delta;
    // Context lines that fall inside a neighbouring hunk's change no longer
    // exist verbatim in the patched text; keep only the untouched ones.
    inv.context_before = hunk.context_before;
    if (i > 0) {
      const PatchHunk& prev = patch.hunks[i - 1];
      const int prev_end =
          prev.anchor_line + static_cast<int>(prev.removed.size());
      const int ctx_start =
          hunk.anchor_line - static_cast<int>(hunk.context_before.size());
      const int drop = std::max(0, prev_end - ctx_start);
      inv.context_before.erase(
          inv.context_before.begin(),
          inv.context_before.begin() +
              std::min<std::size_t>(drop, inv.context_before.size()));
    }
    inv.context_after = hunk.context_after;
    if (i + 1 < patch.hunks.size()) {
      const int after_start =
          hunk.anchor_line + static_cast<int>(hunk.removed.size());
      const int keep = std::max(0, patch.hunks[i + 1].anchor_line - after_start);
      if (static_cast<std::size_t>(keep) < inv.context_after.size()) {
        inv.context_after.resize(keep);
      }
    }
    delta += static_cast<int>(hunk.added.size()) -
             static_cast<int>(hunk.removed.size());
    inverse.hunks.push_back(std::move(inv));
  }
  return inverse;
}

std::string ToUnifiedDiff(const PatchFile& patch) {
  std::ostringstream out;
  const std::string target = patch.target.empty() ? "source.c" : patch.target;
  out << "--- a/" << target << "\n";
  out << "+++ b/" << target << "\n";
  int delta = 0;
  for (const PatchHunk& hunk : patch.hunks) {
    const int cb = static_cast<int>(hunk.context_before.size());
    const int ca = static_cast<int>(hunk.context_after.size());
    const int old_len = cb + static_cast<int>(hunk.removed.size()) + ca;
    const int new_len = cb + static_cast<int>(hunk.added.size()) + ca;
    int old_start = hunk.anchor_line - cb;
    int new_start = old_start + delta;
    if (old_len == 0) --old_start;
    if (new_len == 0) --new_start;
    out << "@@ -" << old_start << "," << old_len << " +" << new_start << ","
        << new_len << " @@\n";
    for (const auto& l : hunk.context_before) out << " " << l << "\n";
    for (const auto& l : hunk.removed) out << "-" << l << "\n";
    for (const auto& l : hunk.added) out << "+" << l << "\n";
    for (const auto& l : hunk.context_after) out << " " << l << "\n";
    delta += static_cast<int>(hunk.added.size()) -
             static_cast<int>(hunk.removed.size());
  }
  return out.str();
}

PatchFile ParseUnifiedDiff(std::string_view text, std::string id) {
  PatchFile patch;
  patch.id = std::move(id);
  LineBuffer buffer = LineBuffer::Split(text);
  const auto& lines = buffer.lines;
  std::size_t i = 0;
  auto strip_prefix = [](std::string_view path) {
    path = Trim(path);
    std::size_t tab = path.find('\t');
    if (tab != std::string_view::npos) path = path.substr(0, tab);
    if (path.starts_with("a/") || path.starts_with("b/")) path.remove_prefix(2);
    return std::string(path);
  };
  while (i < lines.size()) {
    std::string_view line = lines[i];
    if (line.starts_with("+++ ")) {
      patch.target = strip_prefix(line.substr(4));
      ++i;
      continue;
    }
    if (line.starts_with("--- ")) {
      if (patch.target.empty()) patch.target = strip_prefix(line.substr(4));
      ++i;
      continue;
    }
    if (!line.starts_with("@@ ")) {
      ++i;
      continue;
    }
    std::size_t pos = line.find('-');
    if (pos == std::string_view::npos) {
      throw Error(ErrorCode::kMalformedPatch, "bad hunk header: " + lines[i]);
    }
    auto [old_start, old_len] = ParseRange(line, pos);
    while (pos < line.size() && line[pos] == ' ') ++pos;
    if (pos >= line.size() || line[pos] != '+') {
      throw Error(ErrorCode::kMalformedPatch, "bad hunk header: " + lines[i]);
    }
    int new_len = ParseRange(line, pos).second;
    ++i;

    int old_line = old_len == 0 ? old_start + 1 : old_start;
    int old_seen = 0;
    int new_seen = 0;
    std::vector<std::string> context;
    PatchHunk current;
    bool in_change = false;
    auto flush = [&] {
      if (!in_change) return;
      current.context_after = context;
      patch.hunks.push_back(std::move(current));
      current = PatchHunk();
      in_change = false;
    };
    while (i < lines.size() && (old_seen < old_len || new_seen < new_len)) {
      std::string_view body = lines[i];
      char tag = body.empty() ? ' ' : body[0];
      std::string content(body.empty() ? body : body.substr(1));
      if (tag == '\\') {
        ++i;
        continue;
      }
      if (tag == ' ') {
        // Trailing context of one group doubles as leading context of the
        // next one.
        context.push_back(content);
        ++old_line;
        ++old_seen;
        ++new_seen;
      } else if (tag == '-' || tag == '+') {
        if (in_change && !context.empty()) flush();
        if (!in_change) {
          in_change = true;
          current.context_before = context;
          current.anchor_line = old_line;
          context.clear();
        }
        if (tag == '-') {
          current.removed.push_back(content);
          ++old_line;
          ++old_seen;
        } else {
          current.added.push_back(content);
          ++new_seen;
        }
      } else {
        throw Error(ErrorCode::kMalformedPatch,
                    "unexpected line in hunk: " + lines[i]);
      }
      ++i;
    }
    flush();
  }
  return patch;
}

}  // namespace memfix
