#include "accb/accvalidate/directive.hpp"

#include "accb/cfront/normalize.hpp"

#include <algorithm>
#include <array>

namespace accb::accvalidate {

using cfront::Token;
using cfront::TokenKind;

std::string_view to_string(DirectiveKind k) {
  switch (k) {
  case DirectiveKind::data: return "data";
  case DirectiveKind::kernels: return "kernels";
  case DirectiveKind::loop: return "loop";
  }
  return "?";
}

std::string_view to_string(ClauseKind k) {
  switch (k) {
  case ClauseKind::copy: return "copy";
  case ClauseKind::copyin: return "copyin";
  case ClauseKind::copyout: return "copyout";
  case ClauseKind::create: return "create";
  case ClauseKind::present: return "present";
  case ClauseKind::independent: return "independent";
  case ClauseKind::private_: return "private";
  case ClauseKind::reduction: return "reduction";
  case ClauseKind::gang: return "gang";
  case ClauseKind::worker: return "worker";
  case ClauseKind::vector: return "vector";
  }
  return "?";
}

std::string_view to_string(ReductionOp op) {
  switch (op) {
  case ReductionOp::add: return "+";
  case ReductionOp::mul: return "*";
  case ReductionOp::max: return "max";
  case ReductionOp::min: return "min";
  case ReductionOp::bit_and: return "&";
  case ReductionOp::bit_or: return "|";
  case ReductionOp::bit_xor: return "^";
  case ReductionOp::land: return "&&";
  case ReductionOp::lor: return "||";
  }
  return "?";
}

bool is_data_clause(ClauseKind k) {
  return k == ClauseKind::copy || k == ClauseKind::copyin ||
         k == ClauseKind::copyout || k == ClauseKind::create ||
         k == ClauseKind::present;
}

bool DirectiveNode::has(ClauseKind k) const {
  return std::any_of(clauses.begin(), clauses.end(),
                     [k](const Clause &c) { return c.kind == k; });
}

std::vector<const Clause *> DirectiveNode::all(ClauseKind k) const {
  std::vector<const Clause *> out;
  for (const Clause &c : clauses)
    if (c.kind == k)
      out.push_back(&c);
  return out;
}

namespace {

constexpr std::array unsupported_directives{
    "parallel", "serial", "update",  "cache",  "routine",  "enter",
    "exit",     "wait",   "declare", "atomic", "host_data", "init",
    "shutdown", "set",
};

constexpr std::array unsupported_clauses{
    "async",        "wait",          "num_gangs",     "num_workers",
    "vector_length", "collapse",     "seq",           "auto",
    "tile",         "firstprivate",  "deviceptr",     "if",
    "device_type",  "dtype",         "default",       "pcopy",
    "pcopyin",      "pcopyout",      "pcreate",       "present_or_copy",
    "present_or_copyin", "present_or_copyout", "present_or_create",
    "no_create",    "attach",        "detach",        "self",
    "device_resident", "link",       "use_device",    "finalize",
    "if_present",   "nohost",        "bind",          "read",
    "write",        "update",        "capture",       "delete",
};

template <std::size_t N>
bool listed(const std::array<const char *, N> &list, std::string_view word) {
  return std::any_of(list.begin(), list.end(),
                     [&](const char *w) { return word == w; });
}

std::optional<ClauseKind> clause_kind(std::string_view w) {
  static const std::pair<std::string_view, ClauseKind> table[] = {
      {"copy", ClauseKind::copy},
      {"copyin", ClauseKind::copyin},
      {"copyout", ClauseKind::copyout},
      {"create", ClauseKind::create},
      {"present", ClauseKind::present},
      {"independent", ClauseKind::independent},
      {"private", ClauseKind::private_},
      {"reduction", ClauseKind::reduction},
      {"gang", ClauseKind::gang},
      {"worker", ClauseKind::worker},
      {"vector", ClauseKind::vector},
  };
  for (const auto &[name, kind] : table)
    if (name == w)
      return kind;
  return std::nullopt;
}

struct Failure {
  Diagnostic diag;
};

// Recursive-descent over the significant tokens following `acc`.
class DirectiveParser {
public:
  DirectiveParser(std::vector<Token> toks, SourceLocation end)
      : t_(std::move(toks)), end_(end) {}

  DirectiveNode run() {
    DirectiveNode d;
    if (at_end() || !word(peek()))
      error("E_DIRECTIVE", "expected a directive name after 'acc'", here());
    const Token &name = take();
    if (name.text == "data") {
      d.kind = DirectiveKind::data;
    } else if (name.text == "kernels") {
      d.kind = DirectiveKind::kernels;
      if (!at_end() && peek().text == "loop")
        error("E_UNSUPPORTED", "combined 'kernels loop' directive is not supported",
              name.location);
    } else if (name.text == "loop") {
      d.kind = DirectiveKind::loop;
    } else if (listed(unsupported_directives, name.text)) {
      error("E_UNSUPPORTED", "directive '" + name.text + "' is not supported",
            name.location);
    } else {
      error("E_DIRECTIVE", "unknown directive '" + name.text + "'",
            name.location);
    }
    while (!at_end()) {
      if (peek().is_punct(",")) {
        take();
        continue;
      }
      d.clauses.push_back(clause());
    }
    return d;
  }

private:
  std::vector<Token> t_;
  std::size_t i_ = 0;
  SourceLocation end_;

  static bool word(const Token &t) {
    return t.kind == TokenKind::identifier || t.kind == TokenKind::keyword;
  }
  bool at_end() const { return i_ >= t_.size(); }
  const Token &peek() const { return t_[i_]; }
  const Token &take() { return t_[i_++]; }
  SourceLocation here() const { return at_end() ? end_ : peek().location; }

  [[noreturn]] void error(std::string code, std::string msg, SourceLocation loc) {
    throw Failure{Diagnostic{Severity::error, std::move(code), std::move(msg), loc}};
  }

  void expect(std::string_view p, std::string_view what) {
    if (at_end() || !peek().is_punct(p))
      error("E_CLAUSE", "expected '" + std::string(p) + "' in " + std::string(what),
            here());
    take();
  }

  // Tokens up to the matching `)`; the opening `(` has been consumed.
  std::vector<Token> group(std::string_view what) {
    std::vector<Token> out;
    int depth = 1;
    while (!at_end()) {
      const Token &t = take();
      if (t.is_punct("(") || t.is_punct("["))
        ++depth;
      else if ((t.is_punct(")") || t.is_punct("]")) && --depth == 0)
        return out;
      out.push_back(t);
    }
    error("E_CLAUSE", "unterminated argument list of '" + std::string(what) + "'",
          end_);
  }

  static std::string join(std::span<const Token> toks) {
    std::string s;
    for (std::size_t k = 0; k < toks.size(); ++k) {
      // Keep adjacent words apart ("unsigned int", "2 u").
      if (k > 0 && word(toks[k]) &&
          (word(toks[k - 1]) || toks[k - 1].kind == TokenKind::literal))
        s += ' ';
      s += toks[k].text;
    }
    return s;
  }

  // Splits at depth-0 commas.
  static std::vector<std::vector<Token>> split(const std::vector<Token> &toks) {
    std::vector<std::vector<Token>> parts(1);
    int depth = 0;
    for (const Token &t : toks) {
      if (t.is_punct("(") || t.is_punct("["))
        ++depth;
      else if (t.is_punct(")") || t.is_punct("]"))
        --depth;
      if (depth == 0 && t.is_punct(",")) {
        parts.emplace_back();
        continue;
      }
      parts.back().push_back(t);
    }
    return parts;
  }

  ClauseVar variable(const std::vector<Token> &p, SourceLocation fallback,
                     bool allow_bounds, std::string_view clause) {
    if (p.empty() || p[0].kind != TokenKind::identifier)
      error("E_CLAUSE",
            "expected a variable name in '" + std::string(clause) + "' clause",
            p.empty() ? fallback : p[0].location);
    ClauseVar v{p[0].text, std::nullopt, p[0].location};
    if (p.size() == 1)
      return v;
    if (!allow_bounds || !p[1].is_punct("[") || !p.back().is_punct("]"))
      error("E_CLAUSE",
            "malformed variable '" + p[0].text + "' in '" + std::string(clause) +
                "' clause",
            p[1].location);
    // Find the depth-0 colon inside the brackets.
    std::size_t colon = 0;
    int depth = 0;
    for (std::size_t k = 2; k + 1 < p.size(); ++k) {
      if (p[k].is_punct("(") || p[k].is_punct("["))
        ++depth;
      else if (p[k].is_punct(")") || p[k].is_punct("]"))
        --depth;
      else if (depth == 0 && p[k].is_punct(":")) {
        colon = k;
        break;
      }
    }
    if (colon == 0 || colon + 1 == p.size() - 1)
      error("E_CLAUSE",
            "subarray of '" + p[0].text + "' must have the form [start:count]",
            p[1].location);
    std::span<const Token> all(p);
    std::string start = join(all.subspan(2, colon - 2));
    v.bounds = SubarrayBounds{start.empty() ? "0" : start,
                              join(all.subspan(colon + 1, p.size() - colon - 2))};
    return v;
  }

  Clause clause() {
    const Token &name = take();
    if (!word(name))
      error("E_CLAUSE", "expected a clause name, found '" + name.text + "'",
            name.location);
    auto kind = clause_kind(name.text);
    if (!kind) {
      if (listed(unsupported_clauses, name.text))
        error("E_UNSUPPORTED", "clause '" + name.text + "' is not supported",
              name.location);
      error("E_CLAUSE", "unknown clause '" + name.text + "'", name.location);
    }
    Clause c;
    c.kind = *kind;
    c.location = name.location;
    bool has_args = !at_end() && peek().is_punct("(");
    switch (c.kind) {
    case ClauseKind::independent:
      if (has_args)
        error("E_CLAUSE", "'independent' takes no arguments", peek().location);
      break;
    case ClauseKind::gang:
    case ClauseKind::worker:
    case ClauseKind::vector:
      if (has_args) {
        take();
        auto args = group(name.text);
        // Accept the `length:` / `num:` keyword forms.
        if (args.size() >= 2 && word(args[0]) && args[1].is_punct(":"))
          args.erase(args.begin(), args.begin() + 2);
        if (args.empty())
          error("E_CLAUSE", "empty argument to '" + name.text + "'", name.location);
        c.size = join(args);
      }
      break;
    case ClauseKind::reduction: {
      if (!has_args)
        error("E_CLAUSE", "'reduction' requires (operator:variables)", here());
      take();
      auto args = group(name.text);
      std::size_t colon = 0;
      while (colon < args.size() && !args[colon].is_punct(":"))
        ++colon;
      if (colon == 0 || colon >= args.size())
        error("E_CLAUSE", "'reduction' requires (operator:variables)",
              args.empty() ? name.location : args[0].location);
      std::string op = join(std::span<const Token>(args).first(colon));
      static const std::pair<std::string_view, ReductionOp> ops[] = {
          {"+", ReductionOp::add},      {"*", ReductionOp::mul},
          {"max", ReductionOp::max},    {"min", ReductionOp::min},
          {"&", ReductionOp::bit_and},  {"|", ReductionOp::bit_or},
          {"^", ReductionOp::bit_xor},  {"&&", ReductionOp::land},
          {"||", ReductionOp::lor},
      };
      for (const auto &[text, value] : ops)
        if (op == text)
          c.op = value;
      if (!c.op)
        error("E_CLAUSE", "unknown reduction operator '" + op + "'",
              args[0].location);
      std::vector<Token> rest(args.begin() + colon + 1, args.end());
      for (const auto &p : split(rest))
        c.vars.push_back(variable(p, args[colon].location, false, name.text));
      break;
    }
    default: // data clauses and private
      if (!has_args)
        error("E_CLAUSE", "'" + name.text + "' requires a variable list", here());
      take();
      auto args = group(name.text);
      bool bounds = c.kind != ClauseKind::private_;
      for (const auto &p : split(args))
        c.vars.push_back(variable(p, name.location, bounds, name.text));
      break;
    }
    return c;
  }
};

// Offsets of a token from a sub-lex back into the original coordinates.
SourceLocation shift(SourceLocation base, SourceLocation rel) {
  if (rel.line == 1)
    return {base.line, base.column + rel.column - 1};
  return {base.line + rel.line - 1, rel.column};
}

} // namespace

std::optional<DirectiveNode> parse_directive(std::string_view text,
                                             SourceLocation location,
                                             Diagnostic *error) {
  auto report = [&](Diagnostic d) -> std::optional<DirectiveNode> {
    if (error)
      *error = std::move(d);
    return std::nullopt;
  };
  // Skip `#`, `pragma` and `acc`, tolerating whitespace and continuations.
  std::size_t pos = text.find("acc");
  if (pos == std::string_view::npos)
    return report({Severity::error, "E_DIRECTIVE", "not an OpenACC pragma", location});
  pos += 3;
  SourceLocation base = cfront::advance_location(location, text.substr(0, pos));
  std::vector<Token> toks;
  try {
    for (Token &t : cfront::tokenize(text.substr(pos))) {
      if (t.is_trivia())
        continue;
      t.location = shift(base, t.location);
      toks.push_back(std::move(t));
    }
  } catch (const CompileError &e) {
    Diagnostic d = e.diagnostic();
    d.location = shift(base, d.location);
    return report(d);
  }
  SourceLocation end = cfront::advance_location(location, text);
  try {
    DirectiveNode d = DirectiveParser(std::move(toks), end).run();
    d.location = location;
    d.text = std::string(text);
    return d;
  } catch (const Failure &f) {
    return report(f.diag);
  }
}

ScanResult scan_directives(const cfront::NormalizedSource &src) {
  ScanResult out;
  std::span<const Token> toks = src.tokens;
  for (std::size_t i = 0; i < toks.size(); ++i) {
    if (!toks[i].is_acc_pragma())
      continue;
    SourceLocation loc = src.original_location(i + 1);
    Diagnostic err;
    auto d = parse_directive(toks[i].text, loc, &err);
    if (!d) {
      out.diagnostics.push_back(std::move(err));
      continue;
    }
    d->token = i;
    std::size_t next = cfront::next_significant(toks, i + 1);
    if (next < toks.size() && !toks[next].is_punct("}") &&
        toks[next].kind != TokenKind::directive_line) {
      try {
        d->attached = {next, cfront::statement_end(toks, next)};
        d->attached_keyword = toks[next].text;
      } catch (const CompileError &) {
        // Left unattached; validation reports it.
      }
    }
    out.directives.push_back(std::move(*d));
  }
  // Innermost enclosing directive.
  for (std::size_t k = 0; k < out.directives.size(); ++k) {
    std::optional<std::size_t> best;
    for (std::size_t p = 0; p < out.directives.size(); ++p) {
      const DirectiveNode &cand = out.directives[p];
      if (p == k || !cand.attached.contains(out.directives[k].token))
        continue;
      if (!best || out.directives[*best].attached.contains(cand.attached))
        best = p;
    }
    out.directives[k].parent = best;
  }
  return out;
}

} // namespace accb::accvalidate
