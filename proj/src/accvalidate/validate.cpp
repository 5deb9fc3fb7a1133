#include "accb/accvalidate/directive.hpp"

#include <algorithm>
#include <set>

namespace accb::accvalidate {

namespace {

bool allowed(DirectiveKind d, ClauseKind c) {
  switch (d) {
  case DirectiveKind::data:
    return is_data_clause(c);
  case DirectiveKind::kernels:
    return is_data_clause(c);
  case DirectiveKind::loop:
    return !is_data_clause(c);
  }
  return false;
}

class Validator {
public:
  Validator(std::span<const DirectiveNode> ds, const cfront::Ast &ast)
      : ds_(ds), ast_(ast) {}

  std::vector<Diagnostic> run() {
    for (std::size_t k = 0; k < ds_.size(); ++k)
      check(k);
    std::stable_sort(out_.begin(), out_.end(),
                     [](const Diagnostic &a, const Diagnostic &b) {
                       return a.location < b.location;
                     });
    return std::move(out_);
  }

private:
  std::span<const DirectiveNode> ds_;
  const cfront::Ast &ast_;
  std::vector<Diagnostic> out_;

  void error(std::string code, std::string msg, SourceLocation loc) {
    out_.push_back({Severity::error, std::move(code), std::move(msg), loc});
  }

  bool inside(std::size_t k, DirectiveKind kind) const {
    for (auto p = ds_[k].parent; p; p = ds_[*p].parent)
      if (ds_[*p].kind == kind)
        return true;
    return false;
  }

  void check(std::size_t k) {
    const DirectiveNode &d = ds_[k];
    std::string name(to_string(d.kind));

    for (const Clause &c : d.clauses)
      if (!allowed(d.kind, c.kind))
        error("E_CLAUSE",
              "clause '" + std::string(to_string(c.kind)) +
                  "' is not valid on a '" + name + "' directive",
              c.location);

    if (!ast_.function_at(d.token)) {
      error("E_ATTACH", "'" + name + "' directive outside of a function body",
            d.location);
      return;
    }
    if (d.attached.empty())
      error("E_ATTACH", "'" + name + "' directive must be followed by a statement",
            d.location);
    else if (d.kind == DirectiveKind::loop && d.attached_keyword != "for")
      error("E_ATTACH", "'loop' directive must be followed by a for loop",
            d.location);

    switch (d.kind) {
    case DirectiveKind::kernels:
      if (inside(k, DirectiveKind::kernels))
        error("E_NEST", "kernels region nested inside another kernels region",
              d.location);
      break;
    case DirectiveKind::data:
      if (inside(k, DirectiveKind::kernels))
        error("E_NEST", "data region inside a kernels region", d.location);
      break;
    case DirectiveKind::loop:
      if (!inside(k, DirectiveKind::kernels))
        error("E_NEST", "'loop' directive outside of a kernels region",
              d.location);
      break;
    }

    check_variables(d);
    if (d.kind == DirectiveKind::loop && nest_depth(k) >= 3)
      out_.push_back({Severity::warning, "W_DEEPNEST",
                      "only the two outermost independent loops are mapped to "
                      "the launch geometry; this loop runs sequentially",
                      d.location});
  }

  void check_variables(const DirectiveNode &d) {
    std::set<std::string, std::less<>> seen;
    for (const Clause &c : d.clauses) {
      for (const ClauseVar &v : c.vars) {
        auto decl = ast_.lookup(v.name, d.token);
        if (!decl || decl->declarator->is_function) {
          error("E_UNBOUND", "'" + v.name + "' is not declared", v.location);
          continue;
        }
        const cfront::Declarator &x = *decl->declarator;
        bool aggregate = x.is_array() || x.pointer_depth > 0;
        if (c.kind == ClauseKind::reduction) {
          if (aggregate || !ast_.is_arithmetic(decl->type->text))
            error("E_REDTYPE",
                  "reduction variable '" + v.name + "' must be an arithmetic scalar",
                  v.location);
          continue;
        }
        if (is_data_clause(c.kind)) {
          if (!aggregate)
            error("E_CLAUSE",
                  "'" + v.name + "' in a '" + std::string(to_string(c.kind)) +
                      "' clause must be an array or pointer",
                  v.location);
          else if (!seen.insert(v.name).second)
            error("E_CLAUSE",
                  "'" + v.name + "' appears in more than one data clause",
                  v.location);
        }
      }
      if (c.kind == ClauseKind::reduction && c.op &&
          !(*c.op == ReductionOp::add || *c.op == ReductionOp::mul ||
            *c.op == ReductionOp::max || *c.op == ReductionOp::min))
        error("E_REDOP",
              "reduction operator '" + std::string(to_string(*c.op)) +
                  "' is not supported",
              c.location);
    }
  }

  // Perfect-nesting depth of independent loops ending at directive k, or 0.
  int nest_depth(std::size_t k) const {
    const DirectiveNode &d = ds_[k];
    if (d.kind != DirectiveKind::loop || !d.has(ClauseKind::independent) ||
        d.attached_keyword != "for")
      return 0;
    if (!d.parent)
      return 1;
    const DirectiveNode &p = ds_[*d.parent];
    if (p.kind != DirectiveKind::loop || !p.has(ClauseKind::independent) ||
        p.attached_keyword != "for")
      return 1;
    const cfront::Stmt *outer = ast_.statement_at(p.attached.begin);
    if (!outer || outer->kind != cfront::StmtKind::for_ || outer->children.empty())
      return 1;
    const cfront::Stmt &body = outer->children[0];
    std::vector<const cfront::Stmt *> real;
    for (const cfront::Stmt &s : body.children)
      if (s.kind != cfront::StmtKind::empty)
        real.push_back(&s);
    if (body.kind != cfront::StmtKind::compound || real.size() != 1 ||
        real[0]->first_token != d.token)
      return 1;
    int up = nest_depth(*d.parent);
    return up == 0 ? 1 : up + 1;
  }
};

} // namespace

std::vector<Diagnostic> validate(std::span<const DirectiveNode> directives,
                                 const cfront::Ast &ast) {
  return Validator(directives, ast).run();
}

} // namespace accb::accvalidate
