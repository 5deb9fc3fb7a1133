#include "accb/translate/translate.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace accb::translate {

using accvalidate::DirectiveKind;
using cfront::Stmt;
using cfront::StmtKind;
using cfront::Token;
using cfront::TokenKind;
using cfront::TokenSpan;

std::string_view to_string(BindingKind k) {
  switch (k) {
  case BindingKind::scalar: return "scalar";
  case BindingKind::array: return "array";
  case BindingKind::user_function: return "user-function";
  case BindingKind::user_type: return "user-type";
  case BindingKind::loop_index: return "loop-index";
  case BindingKind::constant: return "constant";
  case BindingKind::builtin: return "builtin";
  case BindingKind::external_call: return "external-call";
  }
  return "?";
}

std::string_view mapped_to(Level level) {
  switch (level) {
  case Level::gang: return "kernel";
  case Level::worker: return "thread block";
  case Level::vector: return "warp";
  case Level::thread: return "thread";
  }
  return "?";
}

const Binding *ScopeBindings::find(std::string_view name) const {
  for (const Binding &b : bindings)
    if (b.name == name)
      return &b;
  return nullptr;
}

Binding *ScopeBindings::find(std::string_view name) {
  for (Binding &b : bindings)
    if (b.name == name)
      return &b;
  return nullptr;
}

const accvalidate::DirectiveNode *Program::directive_at(std::size_t token) const {
  for (const auto &d : directives)
    if (d.token == token)
      return &d;
  return nullptr;
}

std::optional<Program> analyze(std::string_view source,
                               std::vector<Diagnostic> &diags) {
  Program p;
  try {
    p.src = cfront::normalize_text(source);
    p.ast = cfront::parse_ast(p.src);
  } catch (const CompileError &e) {
    diags.push_back(e.diagnostic());
    return std::nullopt;
  }
  auto scan = accvalidate::scan_directives(p.src);
  std::vector<Diagnostic> found = std::move(scan.diagnostics);
  auto more = accvalidate::validate(scan.directives, p.ast);
  found.insert(found.end(), more.begin(), more.end());
  std::stable_sort(found.begin(), found.end(),
                   [](const Diagnostic &a, const Diagnostic &b) {
                     return a.location < b.location;
                   });
  diags.insert(diags.end(), found.begin(), found.end());
  if (has_errors(found))
    return std::nullopt;
  p.directives = std::move(scan.directives);
  p.ir = irdoc::build_intermediate(p.src, p.directives);
  p.reverted = irdoc::revert(p.ir);
  irdoc::attach_functions(p.reverted.table, p.ast);
  return p;
}

namespace {

constexpr std::string_view builtin_functions[] = {
    "sqrt",  "sqrtf",  "fabs",  "fabsf", "exp",   "expf",  "exp2",  "exp2f",
    "log",   "logf",   "log2",  "log2f", "log10", "log10f", "pow",  "powf",
    "sin",   "sinf",   "cos",   "cosf",  "tan",   "tanf",  "asin",  "asinf",
    "acos",  "acosf",  "atan",  "atanf", "atan2", "atan2f", "sinh", "sinhf",
    "cosh",  "coshf",  "tanh",  "tanhf", "floor", "floorf", "ceil", "ceilf",
    "fmin",  "fminf",  "fmax",  "fmaxf", "fmod",  "fmodf", "round", "roundf",
    "trunc", "truncf", "hypot", "hypotf", "abs",  "cbrt",  "cbrtf", "rsqrtf"};

constexpr std::string_view builtin_constants[] = {
    "FLT_MAX", "FLT_MIN", "FLT_EPSILON", "DBL_MAX", "DBL_MIN", "DBL_EPSILON",
    "INT_MAX", "INT_MIN", "UINT_MAX", "LONG_MAX", "LONG_MIN", "ULONG_MAX",
    "SHRT_MAX", "SHRT_MIN", "CHAR_MAX", "CHAR_MIN", "M_PI", "M_E", "NULL"};

template <std::size_t N>
bool one_of(const std::string_view (&list)[N], std::string_view s) {
  return std::find(std::begin(list), std::end(list), s) != std::end(list);
}

std::size_t prev_significant(std::span<const Token> toks, std::size_t i) {
  while (i > 0) {
    --i;
    if (!toks[i].is_trivia())
      return i;
  }
  return toks.size();
}

Binding from_decl(std::string name, const cfront::VisibleDecl &vd) {
  Binding b;
  b.name = std::move(name);
  b.element_type = vd.type->text;
  b.pointer_depth = vd.declarator->pointer_depth;
  for (const auto &e : vd.declarator->extents)
    b.extents.push_back(e.text);
  b.fixed_size = vd.declarator->fixed_size();
  b.definition = vd.span;
  b.origin = vd.origin;
  b.kind = (b.pointer_depth > 0 || !b.extents.empty()) ? BindingKind::array
                                                       : BindingKind::scalar;
  return b;
}

// Index names of `for` loops governed by loop directives inside `span`.
std::set<std::string> directed_indices(const Program &prog, TokenSpan span) {
  std::set<std::string> out;
  auto toks = prog.tokens();
  for (const auto &d : prog.directives) {
    if (d.kind != DirectiveKind::loop || !span.contains(d.token))
      continue;
    const Stmt *s = prog.ast.statement_at(d.token);
    if (!s || s->children.empty() || s->children[0].kind != StmtKind::for_)
      continue;
    const Stmt &f = s->children[0];
    if (f.decl && !f.decl->declarators.empty()) {
      out.insert(f.decl->declarators[0].name);
    } else {
      std::size_t i = cfront::next_significant(toks, f.init.begin);
      if (i < f.init.end && toks[i].kind == TokenKind::identifier)
        out.insert(toks[i].text);
    }
  }
  return out;
}

// Declarations made by statements inside the region, keyed by the token of
// each declared name.
void collect_declarations(const Stmt &s,
                          std::map<std::size_t, cfront::VisibleDecl> &out) {
  if (s.decl)
    for (const auto &d : s.decl->declarators)
      out[d.name_token] = cfront::VisibleDecl{cfront::DeclOrigin::local,
                                              &s.decl->type, &d, s.decl->span};
  for (const Stmt &c : s.children)
    collect_declarations(c, out);
}

} // namespace

bool is_builtin_function(std::string_view name) {
  return one_of(builtin_functions, name);
}

ScopeBindings resolve_scope(const irdoc::Region &region, const Program &prog) {
  ScopeBindings scope;
  auto toks = prog.tokens();
  const auto &dir = region.directive();
  const cfront::Ast &ast = prog.ast;

  auto add = [&](Binding b, std::optional<std::size_t> use) {
    Binding *existing = scope.find(b.name);
    if (!existing) {
      scope.bindings.push_back(std::move(b));
      existing = &scope.bindings.back();
    }
    if (use)
      existing->uses.push_back(*use);
  };

  // Variables named in the region's own data clauses are bound where the
  // directive appears.
  for (const auto &c : dir.clauses) {
    if (!accvalidate::is_data_clause(c.kind))
      continue;
    for (const auto &v : c.vars) {
      auto vd = ast.lookup(v.name, dir.token);
      if (!vd)
        fail("E_UNBOUND", "'" + v.name + "' is not declared", v.location);
      add(from_decl(v.name, *vd), std::nullopt);
    }
  }
  // A data region's body stays host code; only its clauses need binding.
  if (region.kind == DirectiveKind::data)
    return scope;

  TokenSpan span = dir.attached;
  std::set<std::string> indices = directed_indices(prog, span);
  std::map<std::size_t, cfront::VisibleDecl> declared;
  if (const Stmt *body = ast.statement_at(span.begin))
    collect_declarations(*body, declared);

  for (std::size_t i = span.begin; i < span.end; ++i) {
    const Token &t = toks[i];
    if (t.kind != TokenKind::identifier)
      continue;
    std::size_t prev = prev_significant(toks, i);
    if (prev < toks.size() &&
        (toks[prev].is_punct(".") || toks[prev].is_punct("->")))
      continue;
    std::size_t next = cfront::next_significant(toks, i + 1);
    bool call = next < toks.size() && toks[next].is_punct("(");

    Binding b;
    b.name = t.text;
    if (prev < toks.size() && toks[prev].kind == TokenKind::keyword &&
        (toks[prev].text == "struct" || toks[prev].text == "union" ||
         toks[prev].text == "enum")) {
      b.name = toks[prev].text + " " + t.text;
      b.kind = BindingKind::user_type;
      if (auto def = ast.type_definition(b.name))
        b.definition = *def;
      add(std::move(b), i);
      continue;
    }
    if (ast.macro(t.text)) {
      b.kind = BindingKind::constant;
      add(std::move(b), i);
      continue;
    }
    if (auto it = declared.find(i); it != declared.end()) {
      Binding d = from_decl(t.text, it->second);
      d.region_local = true;
      if (indices.contains(t.text) && d.kind == BindingKind::scalar)
        d.kind = BindingKind::loop_index;
      add(std::move(d), std::nullopt);
      continue;
    }
    if (auto vd = ast.lookup(t.text, i)) {
      if (vd->declarator->is_function) {
        b.kind = BindingKind::user_function;
        if (const auto *f = ast.find_function(t.text)) {
          b.definition = f->span;
        } else {
          b.kind = BindingKind::external_call;
          b.definition = vd->span;
        }
        add(std::move(b), i);
        continue;
      }
      Binding d = from_decl(t.text, *vd);
      d.region_local = span.contains(vd->span);
      if (indices.contains(t.text) && d.kind == BindingKind::scalar)
        d.kind = BindingKind::loop_index;
      add(std::move(d), i);
      continue;
    }
    if (const auto *e = ast.enumerator(t.text)) {
      b.kind = BindingKind::constant;
      b.definition = e->span;
      add(std::move(b), i);
      continue;
    }
    if (ast.type_declaration(t.text)) {
      b.kind = BindingKind::user_type;
      b.definition = *ast.type_definition(t.text);
      add(std::move(b), i);
      continue;
    }
    if (call) {
      b.kind = one_of(builtin_functions, t.text) ? BindingKind::builtin
                                                 : BindingKind::external_call;
      add(std::move(b), i);
      continue;
    }
    if (one_of(builtin_constants, t.text)) {
      b.kind = BindingKind::builtin;
      add(std::move(b), i);
      continue;
    }
    fail("E_UNBOUND", "'" + t.text + "' is not declared", prog.location(i));
  }
  return scope;
}

std::string element_size(std::string_view type) {
  std::string t(type);
  for (std::string_view q : {"const ", "volatile "})
    for (auto p = t.find(q); p != std::string::npos; p = t.find(q))
      t.erase(p, q.size());
  static const std::pair<std::string_view, std::string_view> sizes[] = {
      {"char", "1"},         {"signed char", "1"},  {"unsigned char", "1"},
      {"short", "2"},        {"unsigned short", "2"}, {"int", "4"},
      {"unsigned", "4"},     {"unsigned int", "4"}, {"long", "8"},
      {"unsigned long", "8"}, {"long long", "8"},   {"unsigned long long", "8"},
      {"float", "4"},        {"double", "8"}};
  for (auto [name, size] : sizes)
    if (t == name)
      return std::string(size);
  return "sizeof(" + t + ")";
}

std::optional<TransferSize> infer_transfer_size(const Binding &array,
                                                const accvalidate::ClauseVar &var,
                                                const cfront::Ast &ast) {
  auto consts = ast.constant_table();
  std::string elem = element_size(array.element_type);
  // Arrays of arrays transfer whole rows per element of the leading extent.
  std::vector<std::string> rows;
  if (array.pointer_depth == 0 && array.extents.size() > 1)
    rows.assign(array.extents.begin() + 1, array.extents.end());
  else if (array.pointer_depth > 0 && !array.extents.empty())
    rows = array.extents;

  auto elem_value = cfront::evaluate_constant(elem, consts);
  bool unit_known = elem_value.has_value();
  long long unit_value = elem_value.value_or(0);
  std::string unit = elem;
  for (const auto &r : rows) {
    auto v = cfront::evaluate_constant(r, consts);
    unit_known = unit_known && v;
    unit_value *= v.value_or(0);
    unit += "*(" + r + ")";
  }
  if (unit_known)
    unit = std::to_string(unit_value);

  TransferSize ts;
  if (var.bounds) {
    const auto &[start, count] = *var.bounds;
    ts.bytes = "(" + count + ")*" + unit;
    if (start == "0") {
      ts.offset = "0";
      ts.alloc = ts.bytes;
    } else {
      ts.offset = "(" + start + ")*" + unit;
      ts.alloc = "((" + start + ")+(" + count + "))*" + unit;
    }
    auto n = cfront::evaluate_constant(count, consts);
    if (n && unit_known)
      ts.constant_bytes = *n * unit_value;
    return ts;
  }
  if (array.pointer_depth > 0 || array.extents.empty() || array.extents[0].empty())
    return std::nullopt;
  ts.offset = "0";
  auto lead = cfront::evaluate_constant(array.extents[0], consts);
  if (lead && unit_known) {
    ts.constant_bytes = *lead * unit_value;
    ts.bytes = std::to_string(*ts.constant_bytes);
  } else {
    ts.bytes = "(" + array.extents[0] + ")*" + unit;
  }
  ts.alloc = ts.bytes;
  return ts;
}

} // namespace accb::translate
