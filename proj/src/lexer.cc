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

#include "memfix/lexer.h"

#include <algorithm>
#include <array>
#include <cctype>

namespace memfix {
namespace {

constexpr std::array<std::string_view, 44> kKeywords = {
    "auto",     "break",    "case",     "char",       "const",
    "continue", "default",  "do",       "double",     "else",
    "enum",     "extern",   "float",    "for",        "goto",
    "if",       "inline",   "int",      "long",       "register",
    "restrict", "return",   "short",    "signed",     "sizeof",
    "static",   "struct",   "switch",   "typedef",    "union",
    "unsigned", "void",     "volatile", "while",      "_Bool",
    "_Complex", "_Alignas", "_Alignof", "_Atomic",    "_Generic",
    "_Noreturn", "_Static_assert", "_Thread_local", "_Imaginary"};

// Longest first so that greedy matching works.
constexpr std::array<std::string_view, 47> kPunctuators = {
    "<<=", ">>=", "...", "->", "++", "--", "<<", ">>", "<=", ">=", "==", "!=",
    "&&", "||", "*=", "/=", "%=", "+=", "-=", "&=", "^=", "|=", "##",
    "[", "]", "(", ")", "{", "}", ".", "&", "*", "+", "-", "~", "!", "/",
    "%", "<", ">", "^", "|", "?", ":", ";", "=", ","};

bool IsIdentStart(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}

bool IsIdentChar(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  std::vector<Token> Run() {
    std::vector<Token> tokens;
    bool line_start = true;  // only whitespace seen since the last newline
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '\n') {
        Advance(1);
        line_start = true;
        continue;
      }
      if (c == ' ' || c == '\t' || c == '\r' || c == '\f' || c == '\v') {
        Advance(1);
        continue;
      }
      const std::size_t start = pos_;
      const int line = line_;
      const int column = column_;
      TokenKind kind;
      if (c == '#' && line_start) {
        kind = TokenKind::kPreprocessor;
        ScanDirective();
      } else if (c == '/' && Peek(1) == '/') {
        kind = TokenKind::kComment;
        ScanLineComment();
      } else if (c == '/' && Peek(1) == '*') {
        kind = TokenKind::kComment;
        ScanBlockComment();
      } else if (c == '"') {
        kind = TokenKind::kString;
        ScanQuoted('"');
      } else if (c == '\'') {
        kind = TokenKind::kCharLiteral;
        ScanQuoted('\'');
      } else if (IsIdentStart(c)) {
        // String/char prefixes: L"", u8"", u'', U''.
        std::size_t end = pos_;
        while (end < text_.size() && IsIdentChar(text_[end])) ++end;
        std::string_view word = text_.substr(pos_, end - pos_);
        if (end < text_.size() && (text_[end] == '"' || text_[end] == '\'') &&
            (word == "L" || word == "u" || word == "U" || word == "u8")) {
          char quote = text_[end];
          kind = quote == '"' ? TokenKind::kString : TokenKind::kCharLiteral;
          Advance(end - pos_);
          ScanQuoted(quote);
        } else {
          kind = TokenKind::kIdentifier;
          Advance(end - pos_);
        }
      } else if (std::isdigit(static_cast<unsigned char>(c)) ||
                 (c == '.' &&
                  std::isdigit(static_cast<unsigned char>(Peek(1))))) {
        kind = TokenKind::kNumber;
        ScanNumber();
      } else {
        kind = TokenKind::kPunctuator;
        Advance(MatchPunctuator());
      }
      line_start = false;
      tokens.push_back(
          {kind, text_.substr(start, pos_ - start), start, line, column});
    }
    return tokens;
  }

 private:
  char Peek(std::size_t ahead) const {
    return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0';
  }

  void Advance(std::size_t n) {
    for (std::size_t i = 0; i < n && pos_ < text_.size(); ++i, ++pos_) {
      if (text_[pos_] == '\n') {
        ++line_;
        column_ = 1;
      } else {
        ++column_;
      }
    }
  }

  void ScanDirective() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '\\' && Peek(1) == '\n') {
        Advance(2);
        continue;
      }
      if (c == '\\' && Peek(1) == '\r' && Peek(2) == '\n') {
        Advance(3);
        continue;
      }
      if (c == '\n') return;
      if (c == '/' && Peek(1) == '*') {
        ScanBlockComment();
        continue;
      }
      Advance(1);
    }
  }

  void ScanLineComment() {
    while (pos_ < text_.size() && text_[pos_] != '\n') {
      if (text_[pos_] == '\\' && Peek(1) == '\n') {
        Advance(2);
        continue;
      }
      Advance(1);
    }
  }

  void ScanBlockComment() {
    Advance(2);
    while (pos_ < text_.size()) {
      if (text_[pos_] == '*' && Peek(1) == '/') {
        Advance(2);
        return;
      }
      Advance(1);
    }
  }

  void ScanQuoted(char quote) {
    Advance(1);
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '\\') {
        Advance(2);
        continue;
      }
      if (c == '\n') return;  // unterminated; stop at end of line
      Advance(1);
      if (c == quote) return;
    }
  }

  void ScanNumber() {
    // pp-number: digits, letters, '.', and exponent signs.
    Advance(1);
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      char prev = text_[pos_ - 1];
      if (IsIdentChar(c) || c == '.') {
        Advance(1);
      } else if ((c == '+' || c == '-') &&
                 (prev == 'e' || prev == 'E' || prev == 'p' || prev == 'P')) {
        Advance(1);
      } else {
        break;
      }
    }
  }

  std::size_t MatchPunctuator() const {
    std::string_view rest = text_.substr(pos_);
    for (std::string_view p : kPunctuators) {
      if (rest.starts_with(p)) return p.size();
    }
    return 1;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int column_ = 1;
};

}  // namespace

std::vector<Token> Lex(std::string_view text) { return Lexer(text).Run(); }

std::vector<Token> LexCode(std::string_view text) {
  std::vector<Token> tokens = Lex(text);
  std::erase_if(tokens, [](const Token& t) {
    return t.kind == TokenKind::kComment || t.kind == TokenKind::kPreprocessor;
  });
  return tokens;
}

bool IsCKeyword(std::string_view word) {
  return std::find(kKeywords.begin(), kKeywords.end(), word) != kKeywords.end();
}

}  // namespace memfix
