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

#ifndef MEMFIX_TEXT_H_
#define MEMFIX_TEXT_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace memfix {

// A text split on '\n'. Joining the lines back (plus the trailing newline when
// present) reproduces the original bytes exactly.
struct LineBuffer {
  std::vector<std::string> lines;
  bool trailing_newline = false;

  static LineBuffer Split(std::string_view text);
  std::string Join() const;
  std::size_t size() const { return lines.size(); }
};

// Joins lines with '\n' without a trailing newline.
std::string JoinLines(const std::vector<std::string>& lines, std::size_t begin,
                      std::size_t end);

// Removes space, tab, CR and LF.
std::string StripWhitespace(std::string_view text);

std::string_view Trim(std::string_view text);

bool IsBlank(std::string_view text);

std::uint64_t Fnv1a64(std::string_view data);

std::string HexDigest(std::uint64_t value);

std::string ReadFile(const std::filesystem::path& path);

void WriteFile(const std::filesystem::path& path, std::string_view contents);

// A fresh directory under the system temp dir; the caller owns cleanup.
std::filesystem::path MakeScratchDirectory(std::string_view prefix);

// Removes a directory tree on destruction unless Keep() was called.
class ScratchDirectory {
 public:
  explicit ScratchDirectory(std::string_view prefix);
  ~ScratchDirectory();
  ScratchDirectory(const ScratchDirectory&) = delete;
  ScratchDirectory& operator=(const ScratchDirectory&) = delete;

  const std::filesystem::path& path() const { return path_; }
  void Keep() { keep_ = true; }

 private:
  std::filesystem::path path_;
  bool keep_ = false;
};

}  // namespace memfix

#endif  // MEMFIX_TEXT_H_
