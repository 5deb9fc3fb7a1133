#pragma once

#include "accb/diagnostic.hpp"

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace accb::cfront {

enum class TokenKind {
  identifier,
  keyword,
  literal,
  punctuator,
  pragma_line,    // `#pragma ...` through end of (continued) line
  directive_line, // any other preprocessor line (#include, #define, ...)
  comment,
  whitespace,
};

std::string_view to_string(TokenKind kind);

struct Token {
  TokenKind kind = TokenKind::whitespace;
  std::string text;
  SourceLocation location;

  bool is_trivia() const {
    return kind == TokenKind::whitespace || kind == TokenKind::comment;
  }
  bool is(TokenKind k, std::string_view t) const { return kind == k && text == t; }
  bool is_punct(std::string_view t) const { return is(TokenKind::punctuator, t); }
  bool is_keyword(std::string_view t) const { return is(TokenKind::keyword, t); }
  /// True for `#pragma acc ...` lines.
  bool is_acc_pragma() const;

  bool operator==(const Token &) const = default;
};

/// Splits raw bytes into tokens. Concatenating the token texts gives back
/// the input exactly. Throws CompileError(E_LEX) on unterminated literals or
/// block comments.
std::vector<Token> tokenize(std::string_view source);

std::string concat(std::span<const Token> tokens);

bool is_c_keyword(std::string_view word);

/// Location reached after scanning `text` starting at `start`.
SourceLocation advance_location(SourceLocation start, std::string_view text);

} // namespace accb::cfront
