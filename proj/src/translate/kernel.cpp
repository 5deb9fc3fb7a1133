#include "accb/translate/translate.hpp"

#include <algorithm>
#include <set>

namespace accb::translate {

using accvalidate::ClauseKind;
using accvalidate::DirectiveKind;
using accvalidate::DirectiveNode;
using accvalidate::ReductionOp;
using cfront::Stmt;
using cfront::StmtKind;
using cfront::Token;
using cfront::TokenKind;
using cfront::TokenSpan;

namespace {

constexpr int default_block_1d = 256;
constexpr int default_block_2d = 16;
constexpr int max_threads = 1024;

std::vector<std::size_t> significant(std::span<const Token> toks, TokenSpan span) {
  std::vector<std::size_t> out;
  for (std::size_t i = span.begin; i < span.end && i < toks.size(); ++i)
    if (!toks[i].is_trivia())
      out.push_back(i);
  return out;
}

std::string text_of(std::span<const Token> toks, const std::vector<std::size_t> &idx,
                    std::size_t from, std::size_t to) {
  if (from >= to)
    return {};
  return cfront::span_text(toks, {idx[from], idx[to - 1] + 1});
}

bool single_token(std::string_view expr) {
  auto toks = cfront::tokenize(expr);
  return std::count_if(toks.begin(), toks.end(),
                       [](const Token &t) { return !t.is_trivia(); }) == 1;
}

std::string paren(const std::string &expr) {
  return single_token(expr) ? expr : "(" + expr + ")";
}

// Loop directive governing `s` when `s` is `#pragma acc loop` + for.
const DirectiveNode *loop_directive(const Stmt &s, const Program &prog,
                                    const Stmt **loop) {
  if (s.kind != StmtKind::pragma || s.children.empty() ||
      s.children[0].kind != StmtKind::for_)
    return nullptr;
  const DirectiveNode *d = prog.directive_at(s.first_token);
  if (!d || d->kind != DirectiveKind::loop)
    return nullptr;
  *loop = &s.children[0];
  return d;
}

std::string loop_index_type(const Stmt &loop, const std::string &index,
                            const Program &prog) {
  if (loop.decl)
    return loop.decl->type.text;
  if (auto vd = prog.ast.lookup(index, loop.first_token))
    return vd->type->text;
  return "int";
}

[[noreturn]] void noncanonical(const Program &prog, const Stmt &loop,
                               std::string_view what) {
  fail("E_UNSUPPORTED",
       "parallel loop " + std::string(what) +
           " is not in the form the loop can be distributed from",
       prog.location(loop.first_token));
}

LoopDim analyze_loop(const Stmt &loop, const Program &prog) {
  auto toks = prog.tokens();
  auto consts = prog.ast.constant_table();
  LoopDim d;

  // init: `i = lb` or `T i = lb`
  if (loop.decl) {
    if (loop.decl->declarators.size() != 1 || loop.decl->declarators[0].init.empty())
      noncanonical(prog, loop, "initialization");
    const auto &x = loop.decl->declarators[0];
    d.index = x.name;
    d.lower = cfront::span_text(toks, x.init);
  } else {
    auto init = significant(toks, loop.init);
    if (init.size() < 3 || toks[init[0]].kind != TokenKind::identifier ||
        !toks[init[1]].is_punct("="))
      noncanonical(prog, loop, "initialization");
    d.index = toks[init[0]].text;
    d.lower = text_of(toks, init, 2, init.size());
  }
  d.index_type = loop_index_type(loop, d.index, prog);

  // cond: one top-level relational operator with the index on one side.
  auto cond = significant(toks, loop.cond);
  std::optional<std::size_t> op_at;
  int depth = 0;
  for (std::size_t k = 0; k < cond.size(); ++k) {
    const Token &t = toks[cond[k]];
    if (t.is_punct("(") || t.is_punct("["))
      ++depth;
    else if (t.is_punct(")") || t.is_punct("]"))
      --depth;
    else if (depth == 0 && t.kind == TokenKind::punctuator &&
             (t.text == "<" || t.text == "<=" || t.text == ">" || t.text == ">=")) {
      if (op_at)
        noncanonical(prog, loop, "condition");
      op_at = k;
    } else if (depth == 0 && t.kind == TokenKind::punctuator &&
               (t.text == "&&" || t.text == "||" || t.text == "?" || t.text == ","))
      noncanonical(prog, loop, "condition");
  }
  if (!op_at)
    noncanonical(prog, loop, "condition");
  std::string lhs = text_of(toks, cond, 0, *op_at);
  std::string rhs = text_of(toks, cond, *op_at + 1, cond.size());
  d.op = toks[cond[*op_at]].text;
  if (lhs == d.index) {
    d.upper = rhs;
  } else if (rhs == d.index) {
    d.upper = lhs;
    d.op = d.op == "<" ? ">" : d.op == "<=" ? ">=" : d.op == ">" ? "<" : "<=";
  } else {
    noncanonical(prog, loop, "condition");
  }

  // step: ++/--, += c, -= c, i = i + c, i = c + i, i = i - c
  auto step = significant(toks, loop.step);
  auto is_index = [&](std::size_t k) {
    return k < step.size() && toks[step[k]].kind == TokenKind::identifier &&
           toks[step[k]].text == d.index;
  };
  auto punct = [&](std::size_t k, std::string_view p) {
    return k < step.size() && toks[step[k]].is_punct(p);
  };
  std::string amount;
  int sign = 1;
  if (step.size() == 2 && ((is_index(0) && punct(1, "++")) || (punct(0, "++") && is_index(1)))) {
    amount = "1";
  } else if (step.size() == 2 &&
             ((is_index(0) && punct(1, "--")) || (punct(0, "--") && is_index(1)))) {
    amount = "1";
    sign = -1;
  } else if (step.size() >= 3 && is_index(0) && (punct(1, "+=") || punct(1, "-="))) {
    amount = text_of(toks, step, 2, step.size());
    sign = punct(1, "+=") ? 1 : -1;
  } else if (step.size() >= 5 && is_index(0) && punct(1, "=") && is_index(2) &&
             (punct(3, "+") || punct(3, "-"))) {
    amount = text_of(toks, step, 4, step.size());
    sign = punct(3, "+") ? 1 : -1;
  } else if (step.size() >= 5 && is_index(0) && punct(1, "=") &&
             is_index(step.size() - 1) && punct(step.size() - 2, "+")) {
    amount = text_of(toks, step, 2, step.size() - 2);
  } else {
    noncanonical(prog, loop, "increment");
  }
  auto value = cfront::evaluate_constant(amount, consts);
  if (!value)
    fail("E_STEP", "step of parallel loop over '" + d.index +
                       "' is not a compile-time constant",
         prog.location(loop.first_token));
  d.step = sign * *value;
  bool ascending = d.op == "<" || d.op == "<=";
  if (d.step == 0 || (d.step > 0) != ascending)
    fail("E_STEP", "step of parallel loop over '" + d.index +
                       "' moves away from its bound",
         prog.location(loop.first_token));

  long long s = d.step > 0 ? d.step : -d.step;
  bool inclusive = d.op == "<=" || d.op == ">=";
  std::string span = ascending ? paren(d.upper) + "-" + paren(d.lower)
                               : paren(d.lower) + "-" + paren(d.upper);
  if (s == 1 && !inclusive && d.lower == "0" && ascending)
    d.count = d.upper;
  else if (s == 1)
    d.count = span + (inclusive ? "+1" : "");
  else
    d.count = "(" + span + "+" + std::to_string(inclusive ? s : s - 1) + ")/" +
              std::to_string(s);
  return d;
}

bool mentions(std::span<const Token> toks, TokenSpan span, std::string_view name) {
  for (std::size_t i = span.begin; i < span.end; ++i)
    if (toks[i].kind == TokenKind::identifier && toks[i].text == name)
      return true;
  return false;
}

// The inner loop of a 2-D nest: the only statement of the outer body, a
// `loop independent` whose header does not use the outer index.
const Stmt *inner_parallel(const Stmt &outer, const LoopDim &dim, const Program &prog,
                           const DirectiveNode **dir) {
  const Stmt &body = outer.children[0];
  if (body.kind != StmtKind::compound)
    return nullptr;
  const Stmt *only = nullptr;
  for (const Stmt &c : body.children) {
    if (c.kind == StmtKind::empty)
      continue;
    if (only)
      return nullptr;
    only = &c;
  }
  if (!only)
    return nullptr;
  const Stmt *loop = nullptr;
  const DirectiveNode *d = loop_directive(*only, prog, &loop);
  if (!d || !d->has(ClauseKind::independent))
    return nullptr;
  auto toks = prog.tokens();
  TokenSpan header{loop->first_token, loop->children[0].span.begin};
  if (mentions(toks, header, dim.index))
    return nullptr;
  *dir = d;
  return loop;
}

std::optional<int> vector_length(const DirectiveNode &d, const Program &prog) {
  for (const auto *c : d.all(ClauseKind::vector)) {
    if (!c->size)
      continue;
    auto v = cfront::evaluate_constant(*c->size, prog.ast.constant_table());
    if (!v || *v <= 0 || *v > max_threads)
      fail("E_GEOM", "vector length '" + *c->size +
                         "' must be a constant between 1 and " +
                         std::to_string(max_threads),
           c->location);
    return static_cast<int>(*v);
  }
  return std::nullopt;
}

std::string grid_extent(const std::string &count, int block) {
  if (block == 1)
    return count;
  return "(" + paren(count) + "+" + std::to_string(block - 1) + ")/" +
         std::to_string(block);
}

} // namespace

std::vector<KernelUnit> kernel_units(const irdoc::Region &region,
                                     const Program &prog) {
  const DirectiveNode &dir = region.directive();
  const Stmt *stmt = prog.ast.statement_at(dir.attached.begin);
  if (!stmt)
    fail("E_INTERNAL", "kernels region statement not found", dir.location);

  std::vector<const Stmt *> stmts;
  if (stmt->kind == StmtKind::compound) {
    for (const Stmt &c : stmt->children) {
      if (c.kind == StmtKind::empty)
        continue;
      if (c.kind == StmtKind::declaration || c.kind == StmtKind::preprocessor)
        fail("E_UNSUPPORTED",
             "declarations and preprocessor lines at the top level of a kernels "
             "region are not supported",
             prog.location(c.first_token));
      stmts.push_back(&c);
    }
  } else if (stmt->kind != StmtKind::empty) {
    stmts.push_back(stmt);
  }
  if (stmts.empty())
    fail("E_NOLOOP", "kernels region contains no statements", dir.location);

  std::vector<KernelUnit> units;
  for (const Stmt *s : stmts) {
    KernelUnit u;
    u.stmt = s;
    u.directive = loop_directive(*s, prog, &u.loop);
    units.push_back(u);
  }
  return units;
}

LaunchGeometry map_parallelism(const KernelUnit &unit, const Program &prog) {
  LaunchGeometry g;
  if (!unit.directive || !unit.directive->has(ClauseKind::independent))
    return g; // one thread runs the whole statement

  LoopDim outer = analyze_loop(*unit.loop, prog);
  const DirectiveNode *inner_dir = nullptr;
  const Stmt *inner = inner_parallel(*unit.loop, outer, prog, &inner_dir);
  g.loops.push_back(outer);
  if (inner) {
    g.dims = 2;
    g.loops.push_back(analyze_loop(*inner, prog));
    g.block = {default_block_2d, default_block_2d};
    if (auto v = vector_length(*inner_dir, prog))
      g.block[1] = *v;
  } else {
    g.block = {default_block_1d, 1};
    if (auto v = vector_length(*unit.directive, prog))
      g.block[0] = *v;
  }
  if (g.threads_per_block() > max_threads)
    fail("E_GEOM",
         "thread block of " + std::to_string(g.block[0]) + "x" +
             std::to_string(g.block[1]) + " exceeds " +
             std::to_string(max_threads) + " threads",
         prog.location(unit.stmt->first_token));
  for (int d = 0; d < g.dims; ++d)
    g.grid[d] = grid_extent(g.loops[d].count, g.block[d]);
  return g;
}

std::string reduction_identity(ReductionOp op, std::string_view type) {
  std::string t(type);
  bool floating = t.find("float") != std::string::npos ||
                  t.find("double") != std::string::npos;
  bool dbl = t.find("double") != std::string::npos;
  bool is_unsigned = t.find("unsigned") != std::string::npos;
  bool is_long = t.find("long") != std::string::npos;
  switch (op) {
  case ReductionOp::add: return "0";
  case ReductionOp::mul: return "1";
  case ReductionOp::max:
    if (floating)
      return dbl ? "-DBL_MAX" : "-FLT_MAX";
    if (is_unsigned)
      return "0";
    return is_long ? "LONG_MIN" : "INT_MIN";
  case ReductionOp::min:
    if (floating)
      return dbl ? "DBL_MAX" : "FLT_MAX";
    if (is_unsigned)
      return is_long ? "ULONG_MAX" : "UINT_MAX";
    return is_long ? "LONG_MAX" : "INT_MAX";
  default: break;
  }
  fail("E_REDOP", "reduction operator '" + std::string(to_string(op)) +
                      "' cannot be lowered");
}

namespace {

std::string resolve_typedefs(const cfront::Ast &ast, std::string type) {
  for (int guard = 0; guard < 16; ++guard) {
    const cfront::Declaration *d = ast.type_declaration(type);
    if (!d || !d->type.is_typedef)
      break;
    type = d->type.text;
  }
  return type;
}

std::string declare(const Binding &b) {
  std::string s = b.element_type + " " + std::string(b.pointer_depth, '*') + b.name;
  for (const auto &e : b.extents)
    s += "[" + e + "]";
  return s + ";";
}

// True when token `tok` inside `s` is reached on every execution of `s`
// before anything else in it runs: the start of an expression statement or
// of a for-init along a path of compound statements.
bool written_first(std::span<const Token> toks, const Stmt &s, std::size_t tok) {
  switch (s.kind) {
  case StmtKind::compound:
  case StmtKind::pragma:
    for (const Stmt &c : s.children)
      if (c.span.contains(tok))
        return written_first(toks, c, tok);
    return false;
  case StmtKind::expression: return s.first_token == tok;
  case StmtKind::for_:
    return !s.decl && s.init.contains(tok) &&
           cfront::next_significant(toks, s.init.begin) == tok;
  default: return false;
  }
}

struct BodyCheck {
  const Program &prog;
  bool top_continue = false;

  // `depth` counts enclosing loops; `switches` enclosing switch statements.
  void walk(const Stmt &s, int depth, int switches) {
    switch (s.kind) {
    case StmtKind::return_:
      fail("E_UNSUPPORTED", "'return' inside a kernels region",
           prog.location(s.first_token));
    case StmtKind::break_:
      if (depth == 0 && switches == 0)
        fail("E_UNSUPPORTED", "'break' out of a kernels region loop",
             prog.location(s.first_token));
      return;
    case StmtKind::continue_:
      if (depth == 0)
        top_continue = true;
      return;
    case StmtKind::for_:
    case StmtKind::while_:
    case StmtKind::do_:
      for (const Stmt &c : s.children)
        walk(c, depth + 1, switches);
      return;
    case StmtKind::switch_:
      for (const Stmt &c : s.children)
        walk(c, depth, switches + 1);
      return;
    default:
      for (const Stmt &c : s.children)
        walk(c, depth, switches);
    }
  }
};

constexpr std::string_view io_functions[] = {
    "printf", "fprintf", "sprintf", "snprintf", "puts",  "putchar", "fputs",
    "fputc",  "scanf",   "fscanf",  "sscanf",   "getchar", "gets",  "fgets",
    "fopen",  "fclose",  "fread",   "fwrite",   "fflush", "perror"};

} // namespace

KernelSpec construct_kernel(const KernelUnit &unit, const ScopeBindings &scope,
                            const LaunchGeometry &geom, const Program &prog,
                            std::string name) {
  auto toks = prog.tokens();
  KernelSpec k;
  k.name = std::move(name);
  k.geometry = geom;
  k.location = prog.location(unit.stmt->first_token);

  // Body statement and the loop directives whose clauses apply.
  const Stmt *body = unit.stmt;
  std::vector<const DirectiveNode *> dirs;
  if (unit.directive)
    dirs.push_back(unit.directive);
  if (!geom.loops.empty()) {
    const Stmt *loop = unit.loop;
    if (geom.dims == 2) {
      const DirectiveNode *inner_dir = nullptr;
      loop = inner_parallel(*unit.loop, geom.loops[0], prog, &inner_dir);
      dirs.push_back(inner_dir);
    }
    body = &loop->children[0];
  }
  TokenSpan unit_span = unit.stmt->span;

  BodyCheck check{prog};
  check.walk(*body, 0, 0);
  bool parallel = !geom.loops.empty();
  if (check.top_continue && !parallel)
    fail("E_UNSUPPORTED", "'continue' out of a kernels region",
         k.location);

  std::set<std::string> parallel_indices;
  for (const auto &l : geom.loops)
    parallel_indices.insert(l.index);
  std::set<std::string> privates;
  std::vector<std::pair<const accvalidate::Clause *, const accvalidate::ClauseVar *>> reds;
  for (const auto *d : dirs) {
    for (const auto *c : d->all(ClauseKind::private_))
      for (const auto &v : c->vars)
        privates.insert(v.name);
    for (const auto *c : d->all(ClauseKind::reduction))
      for (const auto &v : c->vars)
        reds.emplace_back(c, &v);
  }

  // Bindings used by the unit, in order of first use.
  std::vector<std::pair<std::size_t, const Binding *>> used;
  for (const Binding &b : scope.bindings) {
    auto it = std::find_if(b.uses.begin(), b.uses.end(),
                           [&](std::size_t u) { return unit_span.contains(u); });
    if (it != b.uses.end())
      used.emplace_back(*it, &b);
  }
  std::sort(used.begin(), used.end());

  std::set<std::string> reduction_vars;
  for (auto [c, v] : reds) {
    const Binding *b = scope.find(v->name);
    if (!b)
      fail("E_UNBOUND", "'" + v->name + "' is not declared", v->location);
    ReductionSpec r;
    r.op = *c->op;
    r.var = v->name;
    r.type = b->element_type;
    r.identity = reduction_identity(r.op, resolve_typedefs(prog.ast, r.type));
    r.partials = v->name + "__partials";
    r.scratch = v->name + "__scratch";
    reduction_vars.insert(r.var);
    k.reductions.push_back(std::move(r));
  }

  std::vector<KernelParam> arrays, scalars;
  for (auto [first, b] : used) {
    switch (b->kind) {
    case BindingKind::constant:
    case BindingKind::builtin:
    case BindingKind::user_type:
      continue;
    case BindingKind::user_function:
      k.device_functions.push_back(device_name(b->name));
      continue;
    case BindingKind::external_call: {
      bool io = std::find(std::begin(io_functions), std::end(io_functions),
                          b->name) != std::end(io_functions);
      fail("E_UNSUPPORTED",
           io ? "input/output call '" + b->name + "' inside a kernels region"
              : "call to '" + b->name + "', which has no definition in this file",
           prog.location(first));
    }
    default: break;
    }
    if (b->region_local || parallel_indices.contains(b->name) ||
        reduction_vars.contains(b->name))
      continue;
    if (privates.contains(b->name)) {
      k.locals.push_back(declare(*b));
      continue;
    }
    if (b->kind == BindingKind::array) {
      if (b->pointer_depth > 1 || (b->pointer_depth == 1 && !b->extents.empty()))
        fail("E_UNSUPPORTED",
             "array '" + b->name + "' is not a flat array or pointer",
             prog.location(first));
      KernelParam p;
      p.kind = KernelParam::Kind::array;
      p.name = b->name;
      p.type = b->element_type;
      for (std::size_t e = 1; e < b->extents.size(); ++e)
        p.extents += "[" + b->extents[e] + "]";
      p.host_arg = b->name + "__dev";
      arrays.push_back(std::move(p));
      continue;
    }
    std::size_t next = cfront::next_significant(toks, first + 1);
    if (next < toks.size() && toks[next].is_punct("=") && written_first(toks, *body, first) &&
        body->span.contains(first)) {
      k.locals.push_back(declare(*b));
      continue;
    }
    KernelParam p;
    p.kind = KernelParam::Kind::scalar;
    p.name = b->name;
    p.type = b->element_type;
    p.host_arg = b->name;
    scalars.push_back(std::move(p));
  }
  k.params = std::move(arrays);
  k.params.insert(k.params.end(), scalars.begin(), scalars.end());
  for (const auto &r : k.reductions) {
    KernelParam p;
    p.kind = KernelParam::Kind::partials;
    p.name = r.partials;
    p.type = r.type;
    p.host_arg = r.partials;
    k.params.push_back(std::move(p));
  }

  // Body text: acc pragmas dropped, hoisted calls renamed.
  std::string text;
  for (std::size_t i = body->span.begin; i < body->span.end; ++i) {
    const Token &t = toks[i];
    if (t.is_acc_pragma())
      continue;
    if (t.kind == TokenKind::identifier) {
      const Binding *b = scope.find(t.text);
      if (b && b->kind == BindingKind::user_function) {
        text += device_name(t.text);
        continue;
      }
    }
    text += t.text;
  }
  if (check.top_continue)
    text = "do " + text + " while (0);";
  k.body = std::move(text);

  for (std::size_t d = 0; d < geom.loops.size(); ++d) {
    const LoopDim &l = geom.loops[d];
    if (!k.guard.empty())
      k.guard += " && ";
    k.guard += l.index + " " + l.op + " " + paren(l.upper);
  }
  std::sort(k.device_functions.begin(), k.device_functions.end());
  k.device_functions.erase(
      std::unique(k.device_functions.begin(), k.device_functions.end()),
      k.device_functions.end());
  return k;
}

} // namespace accb::translate
