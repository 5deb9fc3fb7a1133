#include "accb/cfront/normalize.hpp"

#include <string>

namespace accb::cfront {

namespace {

bool opens(const Token &t) {
  return t.kind == TokenKind::punctuator &&
         (t.text == "(" || t.text == "[" || t.text == "{");
}
bool closes(const Token &t) {
  return t.kind == TokenKind::punctuator &&
         (t.text == ")" || t.text == "]" || t.text == "}");
}
char closer_for(const std::string &open) {
  return open == "(" ? ')' : open == "[" ? ']' : '}';
}

void check_balanced(std::span<const Token> toks) {
  std::vector<std::size_t> stack;
  for (std::size_t i = 0; i < toks.size(); ++i) {
    const Token &t = toks[i];
    if (opens(t)) {
      stack.push_back(i);
    } else if (closes(t)) {
      if (stack.empty())
        fail("E_PARSE", "unmatched '" + t.text + "'", t.location);
      const Token &o = toks[stack.back()];
      if (closer_for(o.text) != t.text[0])
        fail("E_PARSE", "'" + t.text + "' does not match '" + o.text + "'",
             t.location);
      stack.pop_back();
    }
  }
  if (!stack.empty())
    fail("E_PARSE", "unclosed '" + toks[stack.back()].text + "'",
         toks[stack.back()].location);
}

SourceLocation location_at(std::span<const Token> toks, std::size_t i) {
  if (i < toks.size())
    return toks[i].location;
  if (toks.empty())
    return {1, 1};
  return advance_location(toks.back().location, toks.back().text);
}

// Index of the `(` following a control keyword at `kw`.
std::size_t header_open(std::span<const Token> toks, std::size_t kw) {
  std::size_t open = next_significant(toks, kw + 1);
  if (open >= toks.size() || !toks[open].is_punct("("))
    fail("E_PARSE", "expected '(' after '" + toks[kw].text + "'",
         location_at(toks, open));
  return open;
}

// Last significant index strictly before `end`.
std::size_t last_significant(std::span<const Token> toks, std::size_t end) {
  while (end > 0 && toks[end - 1].is_trivia())
    --end;
  return end - 1;
}

} // namespace

std::size_t next_significant(std::span<const Token> toks, std::size_t i) {
  while (i < toks.size() && toks[i].is_trivia())
    ++i;
  return i;
}

std::size_t matching_close(std::span<const Token> toks, std::size_t open) {
  int depth = 0;
  for (std::size_t i = open; i < toks.size(); ++i) {
    if (opens(toks[i]))
      ++depth;
    else if (closes(toks[i]) && --depth == 0)
      return i;
  }
  fail("E_PARSE", "unclosed '" + toks[open].text + "'", toks[open].location);
}

std::size_t statement_end(std::span<const Token> toks, std::size_t begin) {
  std::size_t i = next_significant(toks, begin);
  if (i >= toks.size())
    fail("E_PARSE", "expected a statement", location_at(toks, i));
  const Token &t = toks[i];

  if (t.kind == TokenKind::pragma_line) {
    std::size_t n = next_significant(toks, i + 1);
    if (n >= toks.size() || toks[n].is_punct("}"))
      return i + 1;
    return statement_end(toks, i + 1);
  }
  if (t.kind == TokenKind::directive_line)
    return i + 1;
  if (t.is_punct("{"))
    return matching_close(toks, i) + 1;
  if (t.is_punct(";"))
    return i + 1;
  if (t.is_punct("}"))
    fail("E_PARSE", "expected a statement before '}'", t.location);

  if (t.kind == TokenKind::keyword) {
    if (t.text == "if") {
      std::size_t close = matching_close(toks, header_open(toks, i));
      std::size_t end = statement_end(toks, close + 1);
      std::size_t e = next_significant(toks, end);
      if (e < toks.size() && toks[e].is_keyword("else"))
        return statement_end(toks, e + 1);
      return end;
    }
    if (t.text == "for" || t.text == "while" || t.text == "switch") {
      std::size_t close = matching_close(toks, header_open(toks, i));
      return statement_end(toks, close + 1);
    }
    if (t.text == "do") {
      std::size_t body_end = statement_end(toks, i + 1);
      std::size_t w = next_significant(toks, body_end);
      if (w >= toks.size() || !toks[w].is_keyword("while"))
        fail("E_PARSE", "expected 'while' after do body", location_at(toks, w));
      std::size_t close = matching_close(toks, header_open(toks, w));
      std::size_t semi = next_significant(toks, close + 1);
      if (semi >= toks.size() || !toks[semi].is_punct(";"))
        fail("E_PARSE", "expected ';' after do-while", location_at(toks, semi));
      return semi + 1;
    }
    if (t.text == "else")
      fail("E_PARSE", "'else' without a matching 'if'", t.location);
    if (t.text == "case" || t.text == "default") {
      std::size_t j = i + 1;
      int depth = 0;
      for (; j < toks.size(); ++j) {
        if (opens(toks[j]))
          ++depth;
        else if (closes(toks[j]))
          --depth;
        else if (depth == 0 && toks[j].is_punct(":"))
          break;
      }
      if (j >= toks.size())
        fail("E_PARSE", "expected ':' after case label", t.location);
      std::size_t n = next_significant(toks, j + 1);
      if (n >= toks.size() || toks[n].is_punct("}"))
        return j + 1;
      return statement_end(toks, j + 1);
    }
  }

  // Expression or declaration statement: up to the `;` at nesting depth 0.
  for (std::size_t j = i; j < toks.size(); ++j) {
    const Token &u = toks[j];
    if (opens(u)) {
      j = matching_close(toks, j);
      continue;
    }
    if (closes(u))
      fail("E_PARSE", "expected ';' before '" + u.text + "'", u.location);
    if (u.kind == TokenKind::pragma_line || u.kind == TokenKind::directive_line)
      fail("E_PARSE", "expected ';' before preprocessor line", u.location);
    if (u.is_punct(";"))
      return j + 1;
  }
  fail("E_PARSE", "expected ';' at end of input", location_at(toks, toks.size()));
}

NormalizedSource normalize(std::span<const Token> toks) {
  check_balanced(toks);

  // Brace texts to insert after token k. Closers registered later belong to
  // inner statements and must come first, so they are prepended.
  struct Insertion {
    std::string space;
    std::string brace;
  };
  std::vector<std::vector<Insertion>> after(toks.size());
  std::vector<bool> do_tail(toks.size(), false);

  auto brace = [&](std::size_t header_last, std::size_t body_begin) {
    std::size_t body = next_significant(toks, body_begin);
    if (body >= toks.size())
      fail("E_PARSE", "missing body", location_at(toks, body));
    if (toks[body].is_punct("{"))
      return matching_close(toks, body) + 1;
    std::size_t end = statement_end(toks, body_begin);
    after[header_last].push_back({" ", "{"});
    std::size_t last = last_significant(toks, end);
    // A brace on the same line as a preprocessor line would become part of it.
    bool line_token = toks[last].kind == TokenKind::pragma_line ||
                      toks[last].kind == TokenKind::directive_line;
    auto &tail = after[last];
    tail.insert(tail.begin(), {line_token ? "\n" : " ", "}"});
    return end;
  };

  for (std::size_t i = 0; i < toks.size(); ++i) {
    const Token &t = toks[i];
    if (t.kind != TokenKind::keyword)
      continue;
    if (t.text == "if" || t.text == "for" ||
        (t.text == "while" && !do_tail[i])) {
      std::size_t close = matching_close(toks, header_open(toks, i));
      brace(close, close + 1);
    } else if (t.text == "else") {
      std::size_t n = next_significant(toks, i + 1);
      if (n < toks.size() && toks[n].is_keyword("if"))
        continue;
      brace(i, i + 1);
    } else if (t.text == "do") {
      std::size_t body_end = brace(i, i + 1);
      std::size_t w = next_significant(toks, body_end);
      if (w >= toks.size() || !toks[w].is_keyword("while"))
        fail("E_PARSE", "expected 'while' after do body", location_at(toks, w));
      do_tail[w] = true;
    }
  }

  NormalizedSource out;
  SourceLocation loc{1, 1};
  auto push = [&](TokenKind kind, std::string text,
                  std::optional<SourceLocation> origin) {
    Token tok{kind, std::move(text), loc};
    loc = advance_location(loc, tok.text);
    out.text += tok.text;
    out.tokens.push_back(std::move(tok));
    out.provenance.push_back(Provenance{origin});
  };
  for (std::size_t i = 0; i < toks.size(); ++i) {
    push(toks[i].kind, toks[i].text, toks[i].location);
    for (const Insertion &ins : after[i]) {
      push(TokenKind::whitespace, ins.space, std::nullopt);
      push(TokenKind::punctuator, ins.brace, std::nullopt);
    }
  }
  return out;
}

SourceLocation NormalizedSource::original_location(std::size_t i) const {
  if (i >= tokens.size())
    i = tokens.size();
  while (i > 0) {
    --i;
    if (provenance[i].original)
      return *provenance[i].original;
  }
  return {1, 1};
}

SourceLocation NormalizedSource::original_location(SourceLocation normalized) const {
  for (std::size_t i = 0; i < tokens.size(); ++i)
    if (tokens[i].location == normalized)
      return original_location(i + 1);
  if (!tokens.empty() && normalized > tokens.back().location)
    return original_location(tokens.size());
  return normalized;
}

NormalizedSource normalize_text(std::string_view source) {
  return normalize(tokenize(source));
}

} // namespace accb::cfront
