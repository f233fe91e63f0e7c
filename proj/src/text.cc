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

#include "memfix/text.h"

#include <atomic>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <system_error>

#include <unistd.h>

#include "memfix/error.h"

namespace memfix {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kContextMismatch: return "ContextMismatch";
    case ErrorCode::kOverlappingHunks: return "OverlappingHunks";
    case ErrorCode::kMalformedPatch: return "MalformedPatch";
    case ErrorCode::kBinaryNotFound: return "BinaryNotFound";
    case ErrorCode::kMalformedOutput: return "MalformedOutput";
    case ErrorCode::kNotUnsafe: return "NotUnsafe";
    case ErrorCode::kFaultLineOutOfRange: return "FaultLineOutOfRange";
    case ErrorCode::kMissingFeedback: return "MissingFeedback";
    case ErrorCode::kUnknownTemplate: return "UnknownTemplate";
    case ErrorCode::kInvalidPromptSpec: return "InvalidPromptSpec";
    case ErrorCode::kBudgetTooSmall: return "BudgetTooSmall";
    case ErrorCode::kContextOverflow: return "ContextOverflow";
    case ErrorCode::kEndpointError: return "EndpointError";
    case ErrorCode::kAuthMissing: return "AuthMissing";
    case ErrorCode::kEmptyReply: return "EmptyReply";
    case ErrorCode::kWindowMismatch: return "WindowMismatch";
    case ErrorCode::kCompilerNotFound: return "CompilerNotFound";
    case ErrorCode::kEmptyInput: return "EmptyInput";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kConfigError: return "ConfigError";
    case ErrorCode::kInternal: return "Internal";
  }
  return "Unknown";
}

LineBuffer LineBuffer::Split(std::string_view text) {
  LineBuffer buffer;
  if (text.empty()) return buffer;
  std::size_t start = 0;
  while (true) {
    std::size_t nl = text.find('\n', start);
    if (nl == std::string_view::npos) {
      buffer.lines.emplace_back(text.substr(start));
      break;
    }
    buffer.lines.emplace_back(text.substr(start, nl - start));
    start = nl + 1;
    if (start == text.size()) {
      buffer.trailing_newline = true;
      break;
    }
  }
  return buffer;
}

std::string LineBuffer::Join() const {
  std::string out = JoinLines(lines, 0, lines.size());
  if (trailing_newline) out.push_back('\n');
  return out;
}

std::string JoinLines(const std::vector<std::string>& lines, std::size_t begin,
                      std::size_t end) {
  std::string out;
  for (std::size_t i = begin; i < end; ++i) {
    if (i != begin) out.push_back('\n');
    out += lines[i];
  }
  return out;
}

std::string StripWhitespace(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') continue;
    out.push_back(c);
  }
  return out;
}

std::string_view Trim(std::string_view text) {
  const char* kSpace = " \t\r\n\f\v";
  std::size_t b = text.find_first_not_of(kSpace);
  if (b == std::string_view::npos) return {};
  std::size_t e = text.find_last_not_of(kSpace);
  return text.substr(b, e - b + 1);
}

bool IsBlank(std::string_view text) { return Trim(text).empty(); }

std::uint64_t Fnv1a64(std::string_view data) {
  std::uint64_t hash = 14695981039346656037ull;
  for (unsigned char c : data) {
    hash ^= c;
    hash *= 1099511628211ull;
  }
  return hash;
}

std::string HexDigest(std::uint64_t value) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(value));
  return buf;
}

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteFile(const std::filesystem::path& path, std::string_view contents) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw Error(ErrorCode::kIoError, "short write to " + path.string());
}

std::filesystem::path MakeScratchDirectory(std::string_view prefix) {
  static std::atomic<unsigned> counter{0};
  auto base = std::filesystem::temp_directory_path();
  auto stamp = std::chrono::steady_clock::now().time_since_epoch().count();
  for (int tries = 0; tries < 100; ++tries) {
    std::string name = std::string(prefix) + "-" + std::to_string(::getpid()) +
                       "-" + std::to_string(counter++) + "-" +
                       std::to_string(stamp % 1000000);
    auto dir = base / name;
    std::error_code ec;
    if (std::filesystem::create_directory(dir, ec)) return dir;
  }
  throw Error(ErrorCode::kIoError, "cannot create scratch directory");
}

ScratchDirectory::ScratchDirectory(std::string_view prefix)
    : path_(MakeScratchDirectory(prefix)) {}

ScratchDirectory::~ScratchDirectory() {
  if (keep_) return;
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

}  // namespace memfix
