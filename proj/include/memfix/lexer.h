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

#ifndef MEMFIX_LEXER_H_
#define MEMFIX_LEXER_H_

#include <cstddef>
#include <string_view>
#include <vector>

namespace memfix {

enum class TokenKind {
  kIdentifier,
  kNumber,
  kPunctuator,
  kString,
  kCharLiteral,
  kComment,
  // A whole directive, continuation lines included.
  kPreprocessor,
};

struct Token {
  TokenKind kind;
  std::string_view text;
  std::size_t offset;  // byte offset into the lexed text
  int line;            // 1-based
  int column;          // 1-based, in bytes
};

// Lightweight C lexer. It never fails: unterminated comments and literals
// extend to the end of input, unknown bytes become one-byte punctuators.
// Whitespace is dropped. The returned views point into `text`.
std::vector<Token> Lex(std::string_view text);

// Comments and preprocessor directives are dropped.
std::vector<Token> LexCode(std::string_view text);

bool IsCKeyword(std::string_view word);

}  // namespace memfix

#endif  // MEMFIX_LEXER_H_
