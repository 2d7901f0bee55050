//
// Project mpa - message-passing automata over labeled trees
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "mpa/errors.hpp"

namespace mpa::detail {

enum class Tok { Ident, Number, Punct, End };

struct Token {
  Tok kind;
  std::string text;
  std::size_t line;
  std::size_t column;
};

/// Shared tokenizer for the formula and program grammars. `#` starts a
/// comment running to the end of the line.
inline std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> out;
  std::size_t line = 1, col = 1, i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  auto is_alpha = [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
  };
  auto is_digit = [](char c) { return c >= '0' && c <= '9'; };
  static const char *two_char[] = {":-", ">=", "!=", "->"};

  while (i < src.size()) {
    char c = src[i];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      advance(1);
      continue;
    }
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    Token t{Tok::Punct, "", line, col};
    std::size_t start = i;
    if (is_alpha(c)) {
      t.kind = Tok::Ident;
      std::size_t j = i;
      while (j < src.size() && (is_alpha(src[j]) || is_digit(src[j]))) ++j;
      t.text = std::string(src.substr(start, j - start));
      advance(j - i);
    } else if (is_digit(c)) {
      t.kind = Tok::Number;
      std::size_t j = i;
      while (j < src.size() && is_digit(src[j])) ++j;
      t.text = std::string(src.substr(start, j - start));
      advance(j - i);
    } else {
      bool matched = false;
      for (auto *op : two_char)
        if (src.substr(i, 2) == op) {
          t.text = op;
          advance(2);
          matched = true;
          break;
        }
      if (!matched) {
        if (std::string_view("(),.!&|=;:{}").find(c) == std::string_view::npos)
          throw SyntaxError(std::string("unexpected character '") + c + "'", line, col);
        t.text = std::string(1, c);
        advance(1);
      }
    }
    out.push_back(std::move(t));
  }
  out.push_back(Token{Tok::End, "", line, col});
  return out;
}

/// Cursor over a token vector with the usual expect/accept helpers.
class TokenCursor {
 public:
  explicit TokenCursor(std::vector<Token> toks) : toks_(std::move(toks)) {}

  const Token &peek(std::size_t ahead = 0) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }
  const Token &next() {
    const Token &t = toks_[pos_];
    if (pos_ + 1 < toks_.size()) ++pos_;
    return t;
  }
  bool at_end() const { return peek().kind == Tok::End; }

  bool is_punct(std::string_view p, std::size_t ahead = 0) const {
    return peek(ahead).kind == Tok::Punct && peek(ahead).text == p;
  }
  bool is_word(std::string_view w, std::size_t ahead = 0) const {
    return peek(ahead).kind == Tok::Ident && peek(ahead).text == w;
  }
  bool accept(std::string_view p) {
    if (!is_punct(p)) return false;
    next();
    return true;
  }
  void expect(std::string_view p) {
    if (!accept(p)) fail("expected '" + std::string(p) + "'");
  }
  std::string ident(std::string_view what = "identifier") {
    if (peek().kind != Tok::Ident) fail("expected " + std::string(what));
    return next().text;
  }
  std::uint64_t number() {
    if (peek().kind != Tok::Number) fail("expected number");
    return std::stoull(next().text);
  }

  [[noreturn]] void fail(const std::string &msg) const {
    const Token &t = peek();
    std::string found = t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
    throw SyntaxError(msg + ", found " + found, t.line, t.column);
  }

  std::size_t position() const { return pos_; }
  void seek(std::size_t p) { pos_ = p; }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace mpa::detail
