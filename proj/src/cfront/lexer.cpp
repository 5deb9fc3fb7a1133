#include "accb/cfront/token.hpp"

#include <algorithm>
#include <array>
#include <cctype>

namespace accb::cfront {

namespace {

constexpr std::array kKeywords = {
    "auto",     "break",    "case",     "char",     "const",    "continue",
    "default",  "do",       "double",   "else",     "enum",     "extern",
    "float",    "for",      "goto",     "if",       "inline",   "int",
    "long",     "register", "restrict", "return",   "short",    "signed",
    "sizeof",   "static",   "struct",   "switch",   "typedef",  "union",
    "unsigned", "void",     "volatile", "while",    "_Bool",    "_Complex",
    "_Alignas", "_Alignof", "_Atomic",  "_Generic", "_Noreturn", "_Static_assert",
    "_Thread_local"};

// Longest first so the greedy match below picks `>>=` over `>>`.
constexpr std::array<std::string_view, 23> kMultiPunct = {
    ">>=", "<<=", "...", "->", "++", "--", "<<", ">>", "<=", ">=", "==", "!=",
    "&&",  "||",  "*=",  "/=", "%=", "+=", "-=", "&=", "^=", "|=", "##"};

bool ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}
bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}
bool digit(char c) { return std::isdigit(static_cast<unsigned char>(c)); }

class Lexer {
public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    while (pos_ < src_.size())
      next();
    return std::move(out_);
  }

private:
  std::string_view src_;
  std::size_t pos_ = 0;
  SourceLocation loc_{1, 1};
  bool line_start_ = true; // only whitespace seen since the last newline
  std::vector<Token> out_;

  char peek(std::size_t off = 0) const {
    return pos_ + off < src_.size() ? src_[pos_ + off] : '\0';
  }

  void emit(TokenKind kind, std::size_t len) {
    Token tok{kind, std::string(src_.substr(pos_, len)), loc_};
    loc_ = advance_location(loc_, tok.text);
    pos_ += len;
    if (kind == TokenKind::whitespace) {
      if (tok.text.find('\n') != std::string::npos)
        line_start_ = true;
    } else if (kind != TokenKind::comment) {
      line_start_ = false;
    }
    out_.push_back(std::move(tok));
  }

  void next() {
    char c = peek();
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
        c == '\v' || (c == '\\' && (peek(1) == '\n' || peek(1) == '\r'))) {
      std::size_t n = 0;
      while (pos_ + n < src_.size()) {
        char d = src_[pos_ + n];
        if (d == ' ' || d == '\t' || d == '\n' || d == '\r' || d == '\f' ||
            d == '\v') {
          ++n;
        } else if (d == '\\' && pos_ + n + 1 < src_.size() &&
                   (src_[pos_ + n + 1] == '\n' || src_[pos_ + n + 1] == '\r')) {
          n += 2;
        } else {
          break;
        }
      }
      emit(TokenKind::whitespace, n);
      return;
    }
    if (c == '/' && peek(1) == '/') {
      std::size_t end = src_.find('\n', pos_);
      emit(TokenKind::comment, (end == std::string_view::npos ? src_.size() : end) - pos_);
      return;
    }
    if (c == '/' && peek(1) == '*') {
      std::size_t end = src_.find("*/", pos_ + 2);
      if (end == std::string_view::npos)
        fail("E_LEX", "unterminated block comment", loc_);
      emit(TokenKind::comment, end + 2 - pos_);
      return;
    }
    if (c == '#' && line_start_) {
      lex_directive();
      return;
    }
    if (ident_start(c)) {
      std::size_t n = 1;
      while (ident_char(peek(n)))
        ++n;
      std::string_view word = src_.substr(pos_, n);
      if ((word == "L" || word == "u" || word == "U" || word == "u8") &&
          (peek(n) == '"' || peek(n) == '\'')) {
        lex_quoted(n);
        return;
      }
      emit(is_c_keyword(word) ? TokenKind::keyword : TokenKind::identifier, n);
      return;
    }
    if (digit(c) || (c == '.' && digit(peek(1)))) {
      std::size_t n = 1;
      while (true) {
        char d = peek(n);
        if ((d == '+' || d == '-') &&
            (peek(n - 1) == 'e' || peek(n - 1) == 'E' || peek(n - 1) == 'p' ||
             peek(n - 1) == 'P')) {
          ++n;
        } else if (ident_char(d) || d == '.') {
          ++n;
        } else {
          break;
        }
      }
      emit(TokenKind::literal, n);
      return;
    }
    if (c == '"' || c == '\'') {
      lex_quoted(0);
      return;
    }
    for (std::string_view p : kMultiPunct) {
      if (src_.substr(pos_, p.size()) == p) {
        emit(TokenKind::punctuator, p.size());
        return;
      }
    }
    emit(TokenKind::punctuator, 1);
  }

  // `prefix` bytes of encoding prefix precede the opening quote.
  void lex_quoted(std::size_t prefix) {
    char quote = peek(prefix);
    std::size_t n = prefix + 1;
    while (true) {
      char d = peek(n);
      if (pos_ + n >= src_.size() || d == '\n') {
        fail("E_LEX",
             quote == '"' ? "unterminated string literal"
                          : "unterminated character literal",
             loc_);
      }
      if (d == '\\') {
        n += 2;
        continue;
      }
      ++n;
      if (d == quote)
        break;
    }
    emit(TokenKind::literal, n);
  }

  void lex_directive() {
    std::size_t n = 0;
    while (pos_ + n < src_.size()) {
      char d = src_[pos_ + n];
      if (d == '\n') {
        if (n > 0 && src_[pos_ + n - 1] == '\\') {
          ++n;
          continue;
        }
        if (n > 1 && src_[pos_ + n - 1] == '\r' && src_[pos_ + n - 2] == '\\') {
          ++n;
          continue;
        }
        break;
      }
      ++n;
    }
    // Keep a trailing CR with the newline so CRLF files round-trip cleanly.
    if (n > 0 && src_[pos_ + n - 1] == '\r')
      --n;
    std::string_view body = src_.substr(pos_ + 1, n - 1);
    std::size_t i = 0;
    while (i < body.size() && (body[i] == ' ' || body[i] == '\t'))
      ++i;
    bool pragma = body.substr(i, 6) == "pragma" &&
                  (i + 6 == body.size() || !ident_char(body[i + 6]));
    emit(pragma ? TokenKind::pragma_line : TokenKind::directive_line, n);
  }
};

} // namespace

std::string_view to_string(TokenKind kind) {
  switch (kind) {
  case TokenKind::identifier: return "identifier";
  case TokenKind::keyword: return "keyword";
  case TokenKind::literal: return "literal";
  case TokenKind::punctuator: return "punctuator";
  case TokenKind::pragma_line: return "pragma-line";
  case TokenKind::directive_line: return "directive-line";
  case TokenKind::comment: return "comment";
  case TokenKind::whitespace: return "whitespace";
  }
  return "?";
}

bool Token::is_acc_pragma() const {
  if (kind != TokenKind::pragma_line)
    return false;
  std::size_t i = text.find("pragma") + 6;
  while (i < text.size() && (text[i] == ' ' || text[i] == '\t' ||
                             (text[i] == '\\' && i + 1 < text.size() &&
                              (text[i + 1] == '\n' || text[i + 1] == '\r')) ||
                             text[i] == '\n' || text[i] == '\r'))
    ++i;
  return text.compare(i, 3, "acc") == 0 &&
         (i + 3 == text.size() || !ident_char(text[i + 3]));
}

bool is_c_keyword(std::string_view word) {
  return std::find(kKeywords.begin(), kKeywords.end(), word) != kKeywords.end();
}

std::vector<Token> tokenize(std::string_view source) {
  return Lexer(source).run();
}

std::string concat(std::span<const Token> tokens) {
  std::string out;
  for (const Token &t : tokens)
    out += t.text;
  return out;
}

SourceLocation advance_location(SourceLocation start, std::string_view text) {
  for (char c : text) {
    if (c == '\n') {
      ++start.line;
      start.column = 1;
    } else {
      ++start.column;
    }
  }
  return start;
}

} // namespace accb::cfront
