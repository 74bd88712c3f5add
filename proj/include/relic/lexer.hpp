#pragma once

#include <cctype>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "relic/error.hpp"

namespace relic::text {

enum class TokenKind { Identifier, Number, Punct, End };

struct Token {
  TokenKind kind = TokenKind::End;
  std::string text;
  std::size_t line = 0;
  std::size_t column = 0;

  bool is(std::string_view punct) const {
    return kind == TokenKind::Punct && text == punct;
  }
};

// Splits Prolog-like text into identifiers, numbers and punctuation.
// `%` starts a comment that runs to the end of the line.
inline std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> out;
  std::size_t line = 1, col = 1;
  std::size_t i = 0;
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
  while (i < src.size()) {
    unsigned char c = static_cast<unsigned char>(src[i]);
    if (std::isspace(c)) {
      advance(1);
      continue;
    }
    if (c == '%') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    Token tok;
    tok.line = line;
    tok.column = col;
    if (std::isalnum(c) || c == '_') {
      std::size_t j = i;
      bool digits = true;
      while (j < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) {
        if (!std::isdigit(static_cast<unsigned char>(src[j]))) digits = false;
        ++j;
      }
      tok.kind = digits ? TokenKind::Number : TokenKind::Identifier;
      tok.text = std::string(src.substr(i, j - i));
      advance(j - i);
    } else if (c == ':' && i + 1 < src.size() && src[i + 1] == '-') {
      tok.kind = TokenKind::Punct;
      tok.text = ":-";
      advance(2);
    } else if (std::string_view("()[],.:-").find(static_cast<char>(c)) !=
               std::string_view::npos) {
      tok.kind = TokenKind::Punct;
      tok.text = std::string(1, static_cast<char>(c));
      advance(1);
    } else {
      throw ParseError(std::string("unexpected character '") + static_cast<char>(c) + "'",
                       line, col);
    }
    out.push_back(std::move(tok));
  }
  Token end;
  end.line = line;
  end.column = col;
  out.push_back(end);
  return out;
}

// Cursor over a token vector with the usual expect/accept helpers.
class TokenStream {
 public:
  explicit TokenStream(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  const Token& peek(std::size_t ahead = 0) const {
    std::size_t k = pos_ + ahead;
    return k < tokens_.size() ? tokens_[k] : tokens_.back();
  }
  const Token& next() {
    const Token& t = peek();
    if (pos_ < tokens_.size() - 1) ++pos_;
    return t;
  }
  bool at_end() const { return peek().kind == TokenKind::End; }

  bool accept(std::string_view punct) {
    if (peek().is(punct)) {
      next();
      return true;
    }
    return false;
  }
  const Token& expect(std::string_view punct) {
    if (!peek().is(punct)) fail("expected '" + std::string(punct) + "'");
    return next();
  }
  const Token& expect_word() {
    const Token& t = peek();
    if (t.kind != TokenKind::Identifier && t.kind != TokenKind::Number)
      fail("expected identifier or number");
    return next();
  }

  [[noreturn]] void fail(const std::string& what) const {
    const Token& t = peek();
    std::string found = t.kind == TokenKind::End ? "end of input" : "'" + t.text + "'";
    throw ParseError(what + ", found " + found, t.line, t.column);
  }

 private:
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

}  // namespace relic::text
