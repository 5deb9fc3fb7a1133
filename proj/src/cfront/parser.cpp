#include "accb/cfront/ast.hpp"

#include <algorithm>
#include <cctype>
#include <set>

namespace accb::cfront {

namespace {

bool is_storage(std::string_view k) {
  return k == "typedef" || k == "extern" || k == "static" || k == "auto" ||
         k == "register" || k == "inline" || k == "_Noreturn" ||
         k == "_Thread_local";
}
bool is_qualifier(std::string_view k) {
  return k == "const" || k == "volatile" || k == "restrict" || k == "_Atomic";
}
bool is_type_keyword(std::string_view k) {
  return k == "void" || k == "char" || k == "short" || k == "int" ||
         k == "long" || k == "float" || k == "double" || k == "signed" ||
         k == "unsigned" || k == "_Bool" || k == "_Complex";
}
bool is_tag_keyword(std::string_view k) {
  return k == "struct" || k == "union" || k == "enum";
}

std::optional<Macro> parse_define(const Token &tok) {
  std::string text;
  // Drop line continuations.
  for (std::size_t i = 0; i < tok.text.size(); ++i) {
    if (tok.text[i] == '\\' && i + 1 < tok.text.size() &&
        (tok.text[i + 1] == '\n' || tok.text[i + 1] == '\r')) {
      text += ' ';
      ++i;
      if (i + 1 < tok.text.size() && tok.text[i] == '\r' && tok.text[i + 1] == '\n')
        ++i;
      continue;
    }
    text += tok.text[i];
  }
  std::size_t i = 1;
  auto skip_ws = [&] {
    while (i < text.size() && (text[i] == ' ' || text[i] == '\t'))
      ++i;
  };
  skip_ws();
  if (text.compare(i, 6, "define") != 0)
    return std::nullopt;
  i += 6;
  skip_ws();
  std::size_t name_begin = i;
  while (i < text.size() && (std::isalnum(static_cast<unsigned char>(text[i])) ||
                             text[i] == '_'))
    ++i;
  if (i == name_begin)
    return std::nullopt;
  Macro m;
  m.name = text.substr(name_begin, i - name_begin);
  if (i < text.size() && text[i] == '(') {
    m.function_like = true;
    std::size_t close = text.find(')', i);
    i = close == std::string::npos ? text.size() : close + 1;
  }
  std::string rest = text.substr(std::min(i, text.size()));
  // Strip a trailing line comment from the replacement.
  if (auto c = rest.find("//"); c != std::string::npos)
    rest.erase(c);
  auto b = rest.find_first_not_of(" \t");
  auto e = rest.find_last_not_of(" \t\r");
  m.replacement = b == std::string::npos ? "" : rest.substr(b, e - b + 1);
  return m;
}

class Parser {
public:
  explicit Parser(const NormalizedSource &src) : t_(src.tokens) {}

  Ast run() {
    while (cur() < t_.size()) {
      std::size_t i = cur();
      const Token &tok = t_[i];
      if (tok.kind == TokenKind::directive_line) {
        record_macro(i);
        ast_.items.push_back({ItemKind::preprocessor, i, {i, i + 1}});
        pos_ = i + 1;
      } else if (tok.kind == TokenKind::pragma_line) {
        ast_.items.push_back({ItemKind::pragma, i, {i, i + 1}});
        pos_ = i + 1;
      } else if (tok.is_punct(";")) {
        pos_ = i + 1;
      } else {
        external_declaration();
      }
    }
    return std::move(ast_);
  }

private:
  std::span<const Token> t_;
  std::size_t pos_ = 0;
  std::set<std::string, std::less<>> typedefs_;
  std::map<std::string, long long, std::less<>> consts_;
  std::set<std::string, std::less<>> defined_functions_, defined_types_,
      initialized_globals_;
  Ast ast_;

  std::size_t cur() const { return next_significant(t_, pos_); }

  const Token &tok_at(std::size_t i) const {
    static const Token eof{TokenKind::whitespace, "", {}};
    return i < t_.size() ? t_[i] : eof;
  }
  const Token &peek() const { return tok_at(cur()); }

  SourceLocation here() const {
    std::size_t i = cur();
    if (i < t_.size())
      return t_[i].location;
    return t_.empty() ? SourceLocation{1, 1}
                      : advance_location(t_.back().location, t_.back().text);
  }

  [[noreturn]] void error(const std::string &msg) const {
    fail("E_PARSE", msg, here());
  }

  bool accept(std::string_view punct) {
    if (peek().is_punct(punct)) {
      pos_ = cur() + 1;
      return true;
    }
    return false;
  }
  void expect(std::string_view punct) {
    if (!accept(punct))
      error("expected '" + std::string(punct) + "'" +
            (cur() < t_.size() ? " before '" + peek().text + "'" : ""));
  }

  void record_macro(std::size_t i) {
    auto m = parse_define(t_[i]);
    if (!m)
      return;
    m->token = i;
    if (!m->function_like) {
      if (auto v = evaluate_constant(m->replacement, consts_))
        consts_[m->name] = *v;
    }
    ast_.macros.push_back(std::move(*m));
  }

  // True if the next tokens start a declaration.
  bool at_declaration() const {
    const Token &k = peek();
    if (k.kind == TokenKind::keyword)
      return is_storage(k.text) || is_qualifier(k.text) ||
             is_type_keyword(k.text) || is_tag_keyword(k.text);
    if (k.kind == TokenKind::identifier && typedefs_.contains(k.text)) {
      // `point p;` declares; `point = 3;` would not, but typedef names are
      // not assignable anyway.
      return true;
    }
    return false;
  }

  // Skips to the bracket matching the one at cur().
  TokenSpan bracket_body() {
    std::size_t open = cur();
    std::size_t close = matching_close(t_, open);
    pos_ = close + 1;
    return {open + 1, close};
  }

  void tagged_type(TypeSpec &ts, std::vector<std::string> &parts) {
    std::size_t kw = cur();
    std::string keyword = t_[kw].text;
    pos_ = kw + 1;
    std::string tag;
    if (peek().kind == TokenKind::identifier) {
      tag = peek().text;
      pos_ = cur() + 1;
    }
    std::string full = tag.empty() ? keyword : keyword + " " + tag;
    if (peek().is_punct("{")) {
      ts.defined_tag = tag.empty() ? "" : full;
      ts.tag_body = bracket_body();
      if (keyword == "enum") {
        enumerators(ts);
      } else {
        members(ts.tag_body, ts.referenced_types);
      }
      if (!tag.empty()) {
        if (defined_types_.contains(full))
          fail("E_DUP", "duplicate definition of '" + full + "'",
               t_[kw].location);
        defined_types_.insert(full);
      }
    } else if (!tag.empty()) {
      ts.referenced_types.push_back(full);
    } else {
      fail("E_PARSE", "expected a tag or body after '" + keyword + "'",
           t_[kw].location);
    }
    parts.push_back(full);
  }

  void members(TokenSpan body, std::vector<std::string> &refs) const {
    for (std::size_t i = body.begin; i < body.end; ++i) {
      const Token &m = t_[i];
      if (m.kind == TokenKind::keyword && is_tag_keyword(m.text)) {
        std::size_t n = next_significant(t_, i + 1);
        if (n < body.end && t_[n].kind == TokenKind::identifier)
          refs.push_back(m.text + " " + t_[n].text);
      } else if (m.kind == TokenKind::identifier && typedefs_.contains(m.text)) {
        refs.push_back(m.text);
      }
    }
  }

  void enumerators(TypeSpec &ts) {
    long long next = 0;
    std::size_t i = ts.tag_body.begin;
    while (true) {
      i = next_significant(t_, i);
      if (i >= ts.tag_body.end)
        break;
      if (t_[i].kind != TokenKind::identifier)
        fail("E_PARSE", "expected enumerator name", t_[i].location);
      std::string name = t_[i].text;
      std::size_t j = next_significant(t_, i + 1);
      std::optional<long long> value = next;
      if (j < ts.tag_body.end && t_[j].is_punct("=")) {
        std::size_t k = j + 1;
        int depth = 0;
        while (k < ts.tag_body.end && !(depth == 0 && t_[k].is_punct(","))) {
          if (t_[k].is_punct("("))
            ++depth;
          if (t_[k].is_punct(")"))
            --depth;
          ++k;
        }
        value = evaluate_constant(t_, {j + 1, k}, consts_);
        j = k;
      }
      if (value) {
        consts_[name] = *value;
        next = *value + 1;
      }
      ts.enumerators.push_back(name);
      j = next_significant(t_, j);
      if (j < ts.tag_body.end && t_[j].is_punct(","))
        ++j;
      i = j;
    }
  }

  std::optional<TypeSpec> specifiers() {
    TypeSpec ts;
    ts.span.begin = cur();
    std::vector<std::string> parts;
    bool saw_type = false;
    bool saw_storage = false;
    while (cur() < t_.size()) {
      const Token &k = peek();
      if (k.kind == TokenKind::keyword) {
        if (is_storage(k.text)) {
          saw_storage = true;
          ts.is_typedef |= k.text == "typedef";
          ts.is_static |= k.text == "static";
          ts.is_extern |= k.text == "extern";
        } else if (is_qualifier(k.text)) {
          parts.push_back(k.text);
        } else if (is_type_keyword(k.text)) {
          parts.push_back(k.text);
          saw_type = true;
        } else if (is_tag_keyword(k.text)) {
          tagged_type(ts, parts);
          saw_type = true;
          continue;
        } else {
          break;
        }
      } else if (k.kind == TokenKind::identifier && !saw_type &&
                 typedefs_.contains(k.text)) {
        parts.push_back(k.text);
        ts.referenced_types.push_back(k.text);
        saw_type = true;
      } else {
        break;
      }
      pos_ = cur() + 1;
    }
    if (!saw_type) {
      if (!saw_storage && parts.empty())
        return std::nullopt;
      parts.push_back("int");
    }
    for (const std::string &p : parts) {
      if (!ts.text.empty())
        ts.text += ' ';
      ts.text += p;
    }
    ts.span.end = pos_;
    return ts;
  }

  Declarator declarator(bool abstract_ok) {
    Declarator d;
    d.span.begin = cur();
    while (accept("*")) {
      ++d.pointer_depth;
      while (peek().kind == TokenKind::keyword && is_qualifier(peek().text))
        pos_ = cur() + 1;
    }
    if (peek().is_punct("(")) {
      std::size_t n = next_significant(t_, cur() + 1);
      if (n < t_.size() && (t_[n].is_punct("*") || t_[n].is_punct("^")))
        error("function pointers are not supported");
      if (!abstract_ok)
        error("parenthesized declarators are not supported");
    }
    if (peek().kind == TokenKind::identifier) {
      d.name = peek().text;
      d.name_token = cur();
      pos_ = cur() + 1;
    } else if (!abstract_ok) {
      error("expected an identifier" +
            (cur() < t_.size() ? " before '" + peek().text + "'" : ""));
    }
    while (true) {
      if (peek().is_punct("[")) {
        Extent e;
        e.expr = bracket_body();
        e.text = span_text(t_, e.expr);
        e.value = evaluate_constant(t_, e.expr, consts_);
        d.extents.push_back(std::move(e));
      } else if (peek().is_punct("(")) {
        if (d.is_function)
          error("functions returning functions are not supported");
        d.is_function = true;
        parameters(d);
      } else {
        break;
      }
    }
    d.span.end = pos_;
    return d;
  }

  void parameters(Declarator &d) {
    expect("(");
    if (accept(")"))
      return;
    if (peek().is_keyword("void")) {
      std::size_t n = next_significant(t_, cur() + 1);
      if (n < t_.size() && t_[n].is_punct(")")) {
        pos_ = n + 1;
        return;
      }
    }
    while (true) {
      if (peek().is_punct("..."))
        error("variadic functions are not supported");
      auto ts = specifiers();
      if (!ts)
        error("expected a parameter type");
      Parameter p{std::move(*ts), declarator(true)};
      d.params.push_back(std::move(p));
      if (accept(","))
        continue;
      expect(")");
      return;
    }
  }

  void initializer(Declarator &d) {
    std::size_t begin = cur();
    std::size_t i = begin;
    while (i < t_.size()) {
      const Token &x = t_[i];
      if (x.is_punct("(") || x.is_punct("[") || x.is_punct("{")) {
        i = matching_close(t_, i) + 1;
        continue;
      }
      if (x.is_punct(",") || x.is_punct(";") || x.is_punct(")"))
        break;
      ++i;
    }
    d.init = {begin, i};
    d.span.end = i;
    pos_ = i;
  }

  // Parses declarators after the specifiers up to and including `;`.
  Declaration declaration_rest(TypeSpec ts, std::size_t begin, bool global) {
    Declaration decl;
    decl.type = std::move(ts);
    if (!accept(";")) {
      while (true) {
        Declarator d = declarator(false);
        if (accept("="))
          initializer(d);
        if (global && !d.init.empty() && !d.is_function) {
          if (initialized_globals_.contains(d.name))
            fail("E_DUP", "duplicate definition of '" + d.name + "'",
                 t_[d.name_token].location);
          initialized_globals_.insert(d.name);
        }
        if (decl.type.is_typedef) {
          if (global && typedefs_.contains(d.name))
            fail("E_DUP", "duplicate typedef '" + d.name + "'",
                 t_[d.name_token].location);
          typedefs_.insert(d.name);
        }
        decl.declarators.push_back(std::move(d));
        if (accept(","))
          continue;
        expect(";");
        break;
      }
    }
    decl.span = {begin, pos_};
    return decl;
  }

  void external_declaration() {
    std::size_t begin = cur();
    auto ts = specifiers();
    if (!ts)
      error("expected a declaration" +
            (cur() < t_.size() ? " before '" + peek().text + "'" : ""));
    if (!peek().is_punct(";")) {
      std::size_t save = pos_;
      Declarator d = declarator(false);
      if (d.is_function && peek().is_punct("{")) {
        if (defined_functions_.contains(d.name))
          fail("E_DUP", "duplicate definition of function '" + d.name + "'",
               t_[d.name_token].location);
        defined_functions_.insert(d.name);
        FunctionDef f;
        f.name = d.name;
        f.return_type = std::move(*ts);
        f.declarator = std::move(d);
        f.body = statement();
        f.span = {begin, pos_};
        ast_.items.push_back(
            {ItemKind::function, ast_.functions.size(), f.span});
        ast_.functions.push_back(std::move(f));
        return;
      }
      pos_ = save;
    }
    Declaration decl = declaration_rest(std::move(*ts), begin, true);
    ast_.items.push_back(
        {ItemKind::declaration, ast_.declarations.size(), decl.span});
    ast_.declarations.push_back(std::move(decl));
  }

  // Expression tokens up to (not including) `stop` at bracket depth 0.
  TokenSpan expression_until(std::string_view stop) {
    std::size_t begin = cur();
    std::size_t i = begin;
    while (i < t_.size()) {
      const Token &x = t_[i];
      if (x.is_punct("(") || x.is_punct("[") || x.is_punct("{")) {
        i = matching_close(t_, i) + 1;
        continue;
      }
      if (x.is_punct(stop))
        break;
      if (x.is_punct(")") || x.is_punct("]") || x.is_punct("}") ||
          x.kind == TokenKind::pragma_line || x.kind == TokenKind::directive_line)
        fail("E_PARSE", "expected '" + std::string(stop) + "'", x.location);
      ++i;
    }
    if (i >= t_.size())
      fail("E_PARSE", "expected '" + std::string(stop) + "' at end of input",
           here());
    pos_ = i;
    return {next_significant(t_, begin), i};
  }

  TokenSpan paren_condition() {
    if (!peek().is_punct("("))
      error("expected '('");
    TokenSpan s = bracket_body();
    return s;
  }

  Stmt statement() {
    std::size_t i = cur();
    if (i >= t_.size())
      error("expected a statement");
    const Token &k = t_[i];
    Stmt s;
    s.first_token = i;
    s.span.begin = i;

    if (k.kind == TokenKind::pragma_line) {
      s.kind = StmtKind::pragma;
      pos_ = i + 1;
      if (cur() < t_.size() && !peek().is_punct("}"))
        s.children.push_back(statement());
    } else if (k.kind == TokenKind::directive_line) {
      s.kind = StmtKind::preprocessor;
      record_macro(i);
      pos_ = i + 1;
    } else if (k.is_punct("{")) {
      s.kind = StmtKind::compound;
      pos_ = i + 1;
      while (!peek().is_punct("}")) {
        if (cur() >= t_.size())
          error("expected '}'");
        s.children.push_back(statement());
      }
      pos_ = cur() + 1;
    } else if (k.is_punct(";")) {
      s.kind = StmtKind::empty;
      pos_ = i + 1;
    } else if (k.kind == TokenKind::keyword && k.text == "if") {
      s.kind = StmtKind::if_;
      pos_ = i + 1;
      s.cond = paren_condition();
      s.children.push_back(statement());
      if (peek().is_keyword("else")) {
        pos_ = cur() + 1;
        s.children.push_back(statement());
      }
    } else if (k.kind == TokenKind::keyword && k.text == "for") {
      s.kind = StmtKind::for_;
      pos_ = i + 1;
      expect("(");
      if (at_declaration()) {
        std::size_t b = cur();
        auto ts = specifiers();
        Declaration d = declaration_rest(std::move(*ts), b, false);
        s.init = {b, d.span.end - 1};
        s.decl = std::move(d);
      } else {
        s.init = expression_until(";");
        pos_ = cur() + 1;
      }
      s.cond = expression_until(";");
      pos_ = cur() + 1;
      s.step = expression_until(")");
      pos_ = cur() + 1;
      s.children.push_back(statement());
    } else if (k.kind == TokenKind::keyword &&
               (k.text == "while" || k.text == "switch")) {
      s.kind = k.text == "while" ? StmtKind::while_ : StmtKind::switch_;
      pos_ = i + 1;
      s.cond = paren_condition();
      s.children.push_back(statement());
    } else if (k.kind == TokenKind::keyword && k.text == "do") {
      s.kind = StmtKind::do_;
      pos_ = i + 1;
      s.children.push_back(statement());
      if (!peek().is_keyword("while"))
        error("expected 'while' after do body");
      pos_ = cur() + 1;
      s.cond = paren_condition();
      expect(";");
    } else if (k.kind == TokenKind::keyword && k.text == "return") {
      s.kind = StmtKind::return_;
      pos_ = i + 1;
      s.expr = expression_until(";");
      pos_ = cur() + 1;
    } else if (k.kind == TokenKind::keyword &&
               (k.text == "break" || k.text == "continue")) {
      s.kind = k.text == "break" ? StmtKind::break_ : StmtKind::continue_;
      pos_ = i + 1;
      expect(";");
    } else if (k.kind == TokenKind::keyword &&
               (k.text == "case" || k.text == "default")) {
      s.kind = StmtKind::case_label;
      pos_ = i + 1;
      s.expr = expression_until(":");
      pos_ = cur() + 1;
    } else if (k.kind == TokenKind::keyword && k.text == "goto") {
      fail("E_PARSE", "goto is not supported", k.location);
    } else if (k.kind == TokenKind::keyword && k.text == "else") {
      fail("E_PARSE", "'else' without a matching 'if'", k.location);
    } else if (at_declaration()) {
      s.kind = StmtKind::declaration;
      auto ts = specifiers();
      s.decl = declaration_rest(std::move(*ts), i, false);
    } else {
      if (k.kind == TokenKind::identifier) {
        std::size_t n = next_significant(t_, i + 1);
        if (n < t_.size() && t_[n].is_punct(":"))
          fail("E_PARSE", "labels are not supported", k.location);
      }
      s.kind = StmtKind::expression;
      s.expr = expression_until(";");
      pos_ = cur() + 1;
    }
    s.span.end = pos_;
    // Trailing trivia is not part of the statement.
    while (s.span.end > s.span.begin && t_[s.span.end - 1].is_trivia())
      --s.span.end;
    return s;
  }
};

// ---- constant evaluation ---------------------------------------------------

class ConstEval {
public:
  ConstEval(std::span<const Token> toks, TokenSpan span,
            const std::map<std::string, long long, std::less<>> &table)
      : table_(table) {
    for (std::size_t i = span.begin; i < span.end && i < toks.size(); ++i)
      if (!toks[i].is_trivia())
        toks_.push_back(&toks[i]);
  }

  std::optional<long long> run() {
    if (toks_.empty())
      return std::nullopt;
    auto v = ternary();
    if (!v || i_ != toks_.size())
      return std::nullopt;
    return v;
  }

private:
  std::vector<const Token *> toks_;
  std::size_t i_ = 0;
  const std::map<std::string, long long, std::less<>> &table_;

  bool at(std::string_view p) const {
    return i_ < toks_.size() && toks_[i_]->is_punct(p);
  }

  std::optional<long long> ternary() {
    auto c = binary(0);
    if (!c)
      return std::nullopt;
    if (at("?")) {
      ++i_;
      auto a = ternary();
      if (!at(":"))
        return std::nullopt;
      ++i_;
      auto b = ternary();
      if (!a || !b)
        return std::nullopt;
      return *c ? a : b;
    }
    return c;
  }

  static int precedence(std::string_view op) {
    if (op == "||") return 1;
    if (op == "&&") return 2;
    if (op == "|") return 3;
    if (op == "^") return 4;
    if (op == "&") return 5;
    if (op == "==" || op == "!=") return 6;
    if (op == "<" || op == ">" || op == "<=" || op == ">=") return 7;
    if (op == "<<" || op == ">>") return 8;
    if (op == "+" || op == "-") return 9;
    if (op == "*" || op == "/" || op == "%") return 10;
    return 0;
  }

  std::optional<long long> binary(int min_prec) {
    auto lhs = unary();
    if (!lhs)
      return std::nullopt;
    while (i_ < toks_.size() && toks_[i_]->kind == TokenKind::punctuator) {
      std::string op = toks_[i_]->text;
      int p = precedence(op);
      if (p == 0 || p <= min_prec)
        break;
      ++i_;
      auto rhs = binary(p);
      if (!rhs)
        return std::nullopt;
      long long a = *lhs, b = *rhs;
      if (op == "||") lhs = a || b;
      else if (op == "&&") lhs = a && b;
      else if (op == "|") lhs = a | b;
      else if (op == "^") lhs = a ^ b;
      else if (op == "&") lhs = a & b;
      else if (op == "==") lhs = a == b;
      else if (op == "!=") lhs = a != b;
      else if (op == "<") lhs = a < b;
      else if (op == ">") lhs = a > b;
      else if (op == "<=") lhs = a <= b;
      else if (op == ">=") lhs = a >= b;
      else if (op == "<<") lhs = a << b;
      else if (op == ">>") lhs = a >> b;
      else if (op == "+") lhs = a + b;
      else if (op == "-") lhs = a - b;
      else if (op == "*") lhs = a * b;
      else if (op == "/" || op == "%") {
        if (b == 0)
          return std::nullopt;
        lhs = op == "/" ? a / b : a % b;
      }
    }
    return lhs;
  }

  std::optional<long long> unary() {
    if (i_ >= toks_.size())
      return std::nullopt;
    const Token &t = *toks_[i_];
    if (t.kind == TokenKind::punctuator) {
      if (t.text == "-" || t.text == "+" || t.text == "~" || t.text == "!") {
        ++i_;
        auto v = unary();
        if (!v)
          return std::nullopt;
        if (t.text == "-") return -*v;
        if (t.text == "~") return ~*v;
        if (t.text == "!") return !*v;
        return v;
      }
      if (t.text == "(") {
        ++i_;
        auto v = ternary();
        if (!v || !at(")"))
          return std::nullopt;
        ++i_;
        return v;
      }
      return std::nullopt;
    }
    if (t.kind == TokenKind::literal) {
      ++i_;
      return literal(t.text);
    }
    if (t.kind == TokenKind::identifier) {
      ++i_;
      auto it = table_.find(t.text);
      if (it == table_.end())
        return std::nullopt;
      return it->second;
    }
    return std::nullopt;
  }

  static std::optional<long long> literal(const std::string &s) {
    if (s.size() >= 3 && s.front() == '\'' && s.back() == '\'') {
      if (s.size() == 3)
        return static_cast<unsigned char>(s[1]);
      return std::nullopt;
    }
    std::string digits = s;
    while (!digits.empty() && (digits.back() == 'u' || digits.back() == 'U' ||
                               digits.back() == 'l' || digits.back() == 'L'))
      digits.pop_back();
    if (digits.empty())
      return std::nullopt;
    int base = 10;
    std::size_t start = 0;
    if (digits.size() > 2 && digits[0] == '0' &&
        (digits[1] == 'x' || digits[1] == 'X')) {
      base = 16;
      start = 2;
    } else if (digits.size() > 1 && digits[0] == '0') {
      base = 8;
      start = 1;
    }
    long long v = 0;
    for (std::size_t i = start; i < digits.size(); ++i) {
      char c = digits[i];
      int d;
      if (c >= '0' && c <= '9') d = c - '0';
      else if (c >= 'a' && c <= 'f') d = c - 'a' + 10;
      else if (c >= 'A' && c <= 'F') d = c - 'A' + 10;
      else return std::nullopt;
      if (d >= base)
        return std::nullopt;
      v = v * base + d;
    }
    return v;
  }
};

const Stmt *find_stmt(const Stmt &s, std::size_t first) {
  if (s.first_token == first)
    return &s;
  for (const Stmt &c : s.children)
    if (c.span.contains(first))
      if (const Stmt *r = find_stmt(c, first))
        return r;
  return nullptr;
}

const Declarator *declares(const Declaration &d, std::string_view name) {
  for (const Declarator &x : d.declarators)
    if (x.name == name)
      return &x;
  return nullptr;
}

// Innermost local declaration of `name` visible at `pos` within `s`.
std::optional<VisibleDecl> find_local(const Stmt &s, std::string_view name,
                                      std::size_t pos) {
  if (s.kind == StmtKind::compound) {
    std::optional<VisibleDecl> best;
    for (const Stmt &c : s.children) {
      if (c.span.end <= pos) {
        if (c.kind == StmtKind::declaration)
          if (const Declarator *d = declares(*c.decl, name))
            best = VisibleDecl{DeclOrigin::local, &c.decl->type, d, c.decl->span};
      } else if (c.span.contains(pos)) {
        if (auto inner = find_local(c, name, pos))
          return inner;
        break;
      } else {
        break;
      }
    }
    return best;
  }
  for (const Stmt &c : s.children)
    if (c.span.contains(pos))
      if (auto inner = find_local(c, name, pos))
        return inner;
  if (s.kind == StmtKind::for_ && s.decl && pos >= s.decl->span.end)
    if (const Declarator *d = declares(*s.decl, name))
      return VisibleDecl{DeclOrigin::local, &s.decl->type, d, s.decl->span};
  if (s.kind == StmtKind::declaration && s.decl) {
    // Visible inside its own later initializers.
    for (const Declarator &d : s.decl->declarators)
      if (d.name == name && d.span.end <= pos)
        return VisibleDecl{DeclOrigin::local, &s.decl->type, &d, s.decl->span};
  }
  return std::nullopt;
}

} // namespace

bool Declarator::fixed_size() const {
  if (extents.empty())
    return false;
  return std::all_of(extents.begin(), extents.end(),
                     [](const Extent &e) { return e.value.has_value(); });
}

Ast parse_ast(const NormalizedSource &src) {
  try {
    return Parser(src).run();
  } catch (const CompileError &e) {
    Diagnostic d = e.diagnostic();
    d.location = src.original_location(d.location);
    throw CompileError(d);
  }
}

const FunctionDef *Ast::find_function(std::string_view name) const {
  for (const FunctionDef &f : functions)
    if (f.name == name)
      return &f;
  return nullptr;
}

const FunctionDef *Ast::function_at(std::size_t i) const {
  for (const FunctionDef &f : functions)
    if (f.span.contains(i))
      return &f;
  return nullptr;
}

std::optional<VisibleDecl> Ast::lookup(std::string_view name,
                                       std::size_t pos) const {
  if (const FunctionDef *f = function_at(pos)) {
    if (auto local = find_local(f->body, name, pos))
      return local;
    for (const Parameter &p : f->declarator.params)
      if (p.declarator.name == name)
        return VisibleDecl{DeclOrigin::parameter, &p.type, &p.declarator,
                           p.declarator.span};
  }
  const VisibleDecl *found = nullptr;
  VisibleDecl best;
  for (const Declaration &d : declarations) {
    if (d.type.is_typedef)
      continue;
    if (const Declarator *x = declares(d, name)) {
      // Prefer a definition over an extern declaration or prototype.
      if (!found || (!x->is_function && !d.type.is_extern)) {
        best = VisibleDecl{DeclOrigin::global, &d.type, x, d.span};
        found = &best;
      }
    }
  }
  if (found)
    return best;
  if (const FunctionDef *f = find_function(name))
    return VisibleDecl{DeclOrigin::global, &f->return_type, &f->declarator,
                       f->span};
  return std::nullopt;
}

const Declaration *Ast::type_declaration(std::string_view name) const {
  bool tag = name.starts_with("struct ") || name.starts_with("union ") ||
             name.starts_with("enum ");
  for (const Declaration &d : declarations) {
    if (tag) {
      if (d.type.defined_tag && *d.type.defined_tag == name)
        return &d;
    } else if (d.type.is_typedef && declares(d, name)) {
      return &d;
    }
  }
  return nullptr;
}

std::optional<TokenSpan> Ast::type_definition(std::string_view name) const {
  if (const Declaration *d = type_declaration(name))
    return d->span;
  return std::nullopt;
}

const Declaration *Ast::enumerator(std::string_view name) const {
  for (const Declaration &d : declarations)
    if (std::find(d.type.enumerators.begin(), d.type.enumerators.end(), name) !=
        d.type.enumerators.end())
      return &d;
  return nullptr;
}

const Macro *Ast::macro(std::string_view name) const {
  const Macro *found = nullptr;
  for (const Macro &m : macros)
    if (m.name == name)
      found = &m;
  return found;
}

const Stmt *Ast::statement_at(std::size_t first_token) const {
  for (const FunctionDef &f : functions)
    if (f.body.span.contains(first_token))
      if (const Stmt *s = find_stmt(f.body, first_token))
        return s;
  return nullptr;
}

bool Ast::is_arithmetic(std::string_view type_text) const {
  static constexpr std::string_view builtin[] = {
      "char", "short", "int", "long", "float", "double", "signed", "unsigned",
      "_Bool", "size_t", "int8_t", "int16_t", "int32_t", "int64_t", "uint8_t",
      "uint16_t", "uint32_t", "uint64_t", "ptrdiff_t"};
  std::vector<std::string_view> words;
  std::size_t i = 0;
  while (i < type_text.size()) {
    std::size_t j = type_text.find(' ', i);
    if (j == std::string_view::npos)
      j = type_text.size();
    std::string_view w = type_text.substr(i, j - i);
    if (!w.empty() && w != "const" && w != "volatile" && w != "restrict")
      words.push_back(w);
    i = j + 1;
  }
  if (words.empty())
    return false;
  if (words[0] == "enum")
    return true;
  if (words[0] == "struct" || words[0] == "union" || words[0] == "void")
    return false;
  if (words.size() == 1 &&
      std::find(std::begin(builtin), std::end(builtin), words[0]) == std::end(builtin)) {
    const Declaration *d = type_declaration(words[0]);
    if (!d)
      return false;
    const Declarator *x = declares(*d, words[0]);
    return x && x->pointer_depth == 0 && !x->is_array() && !x->is_function &&
           is_arithmetic(d->type.text);
  }
  return std::all_of(words.begin(), words.end(), [](std::string_view w) {
    return std::find(std::begin(builtin), std::end(builtin), w) != std::end(builtin);
  });
}

std::map<std::string, long long, std::less<>> Ast::constant_table() const {
  std::map<std::string, long long, std::less<>> table;
  // Macros may refer to later-defined macros; iterate to a fixed point.
  for (std::size_t pass = 0; pass <= macros.size(); ++pass) {
    bool changed = false;
    for (const Macro &m : macros) {
      if (m.function_like || table.contains(m.name))
        continue;
      if (auto v = evaluate_constant(m.replacement, table)) {
        table[m.name] = *v;
        changed = true;
      }
    }
    if (!changed)
      break;
  }
  return table;
}

std::optional<long long>
evaluate_constant(std::span<const Token> toks, TokenSpan span,
                  const std::map<std::string, long long, std::less<>> &constants) {
  return ConstEval(toks, span, constants).run();
}

std::optional<long long>
evaluate_constant(std::string_view text,
                  const std::map<std::string, long long, std::less<>> &constants) {
  std::vector<Token> toks;
  try {
    toks = tokenize(text);
  } catch (const CompileError &) {
    return std::nullopt;
  }
  return evaluate_constant(toks, {0, toks.size()}, constants);
}

std::string span_text(std::span<const Token> toks, TokenSpan span) {
  std::string out;
  bool pending_space = false;
  for (std::size_t i = span.begin; i < span.end && i < toks.size(); ++i) {
    if (toks[i].is_trivia()) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space)
      out += ' ';
    pending_space = false;
    out += toks[i].text;
  }
  return out;
}

std::string raw_text(std::span<const Token> toks, TokenSpan span) {
  std::string out;
  for (std::size_t i = span.begin; i < span.end && i < toks.size(); ++i)
    out += toks[i].text;
  return out;
}

} // namespace accb::cfront
