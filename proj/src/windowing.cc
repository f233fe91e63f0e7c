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

#include "memfix/windowing.h"

#include <algorithm>

#include "memfix/error.h"
#include "memfix/text.h"

namespace memfix {
namespace {

void CheckFaultLine(int fault_line, int line_count) {
  if (fault_line < 1 || fault_line > line_count) {
    throw Error(ErrorCode::kFaultLineOutOfRange,
                "fault line " + std::to_string(fault_line) +
                    " outside 1.." + std::to_string(line_count));
  }
}

CodeWindow Extract(const LineBuffer& lines, int start, int end, int fault) {
  CodeWindow w;
  w.start_line = start;
  w.end_line = end;
  w.fault_offset = fault - start;
  w.text = JoinLines(lines.lines, start - 1, end);
  return w;
}

}  // namespace

int LinesBeforeFault(int budget_lines) {
  // Integer form of floor(0.9 * b), exact for all int budgets.
  return static_cast<int>((9LL * budget_lines) / 10);
}

int CountLines(std::string_view source) {
  return static_cast<int>(LineBuffer::Split(source).size());
}

CodeWindow ContextualWindow(std::string_view source, int fault_line,
                            int budget_lines) {
  const LineBuffer lines = LineBuffer::Split(source);
  const int n = static_cast<int>(lines.size());
  CheckFaultLine(fault_line, n);
  if (budget_lines < 1) {
    throw Error(ErrorCode::kBudgetTooSmall, "window budget must be positive");
  }
  if (budget_lines >= n) return Extract(lines, 1, n, fault_line);

  int before = LinesBeforeFault(budget_lines);
  int after = budget_lines - 1 - before;
  const int room_before = fault_line - 1;
  const int room_after = n - fault_line;
  if (before > room_before) {
    after += before - room_before;
    before = room_before;
  }
  if (after > room_after) {
    before = std::min(room_before, before + (after - room_after));
    after = room_after;
  }
  return Extract(lines, fault_line - before, fault_line + after, fault_line);
}

CodeWindow OneLineWindow(std::string_view source, int fault_line) {
  const LineBuffer lines = LineBuffer::Split(source);
  CheckFaultLine(fault_line, static_cast<int>(lines.size()));
  return Extract(lines, fault_line, fault_line, fault_line);
}

}  // namespace memfix
