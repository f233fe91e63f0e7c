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

#ifndef MEMFIX_WINDOWING_H_
#define MEMFIX_WINDOWING_H_

#include <string>
#include <string_view>

namespace memfix {

// A contiguous run of source lines shown to the model. `text` is the lines
// joined by '\n' with no trailing newline.
struct CodeWindow {
  int start_line = 1;  // 1-based, inclusive
  int end_line = 1;    // 1-based, inclusive
  int fault_offset = 0;
  std::string text;

  int size() const { return end_line - start_line + 1; }
  friend bool operator==(const CodeWindow&, const CodeWindow&) = default;
};

// Lines before the fault in a window of `budget_lines` lines: 90% of the
// budget, rounded down.
int LinesBeforeFault(int budget_lines);

// floor(0.9 * budget) lines before the fault line, the fault line, and the
// rest after it. A side clipped by the file edge gives its surplus to the
// other side. Throws Error{kFaultLineOutOfRange}.
CodeWindow ContextualWindow(std::string_view source, int fault_line,
                            int budget_lines);

// Just the fault line.
CodeWindow OneLineWindow(std::string_view source, int fault_line);

int CountLines(std::string_view source);

}  // namespace memfix

#endif  // MEMFIX_WINDOWING_H_
