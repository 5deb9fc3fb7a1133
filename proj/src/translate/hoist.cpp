#include "accb/translate/translate.hpp"

#include <map>
#include <set>

namespace accb::translate {

using cfront::Token;
using cfront::TokenKind;

std::string device_name(std::string_view function) {
  return "__accb_dev_" + std::string(function);
}

namespace {

std::string unqualified(std::string t) {
  for (std::string_view q : {"const ", "volatile "})
    for (auto p = t.find(q); p != std::string::npos; p = t.find(q))
      t.erase(p, q.size());
  return t;
}

void declared_names(const cfront::Stmt &s, std::set<std::size_t> &out) {
  if (s.decl)
    for (const auto &d : s.decl->declarators)
      out.insert(d.name_token);
  for (const auto &c : s.children)
    declared_names(c, out);
}

constexpr std::string_view storage_words[] = {"static", "inline", "extern"};

class Hoister {
public:
  explicit Hoister(const Program &prog) : prog_(prog), toks_(prog.tokens()) {}

  void root(const Binding &b) {
    if (b.kind == BindingKind::user_function)
      function(b.name);
    else if (b.kind == BindingKind::user_type)
      type(prog_.ast.type_declaration(b.name));
    else if (b.kind == BindingKind::constant)
      type(prog_.ast.enumerator(b.name));
    else if (!b.region_local)
      type(prog_.ast.type_declaration(unqualified(b.element_type)));
  }

  std::vector<HoistedDecl> result() {
    std::vector<HoistedDecl> out = std::move(types_);
    out.insert(out.end(), functions_.begin(), functions_.end());
    return out;
  }

private:
  const Program &prog_;
  std::span<const Token> toks_;
  std::map<std::string, bool, std::less<>> fn_state_; // false: visiting
  std::set<const cfront::Declaration *> type_seen_;
  std::vector<HoistedDecl> types_, functions_;

  void type(const cfront::Declaration *d) {
    if (!d || type_seen_.contains(d))
      return;
    type_seen_.insert(d);
    for (const std::string &ref : d->type.referenced_types)
      type(prog_.ast.type_declaration(ref));
    HoistedDecl h;
    h.is_type = true;
    h.name = d->type.defined_tag && !d->type.defined_tag->empty()
                 ? *d->type.defined_tag
                 : (d->declarators.empty() ? d->type.text : d->declarators[0].name);
    h.text = cfront::raw_text(toks_, d->span);
    types_.push_back(std::move(h));
  }

  void function(const std::string &name) {
    if (auto it = fn_state_.find(name); it != fn_state_.end()) {
      if (!it->second)
        fail("E_RECURSE",
             "function '" + name + "' is recursive and cannot run on the device",
             prog_.location(prog_.ast.find_function(name)->span.begin));
      return;
    }
    const cfront::FunctionDef *f = prog_.ast.find_function(name);
    fn_state_[name] = false;
    std::set<std::size_t> names{f->declarator.name_token};
    declared_names(f->body, names);

    std::string text;
    for (std::size_t i = f->span.begin; i < f->span.end; ++i) {
      const Token &t = toks_[i];
      if (t.kind == TokenKind::keyword &&
          std::find(std::begin(storage_words), std::end(storage_words), t.text) !=
              std::end(storage_words)) {
        // Drop the keyword and the space after it.
        if (i + 1 < f->span.end && toks_[i + 1].kind == TokenKind::whitespace)
          ++i;
        continue;
      }
      if (t.kind == TokenKind::identifier && i == f->declarator.name_token) {
        text += device_name(t.text);
        continue;
      }
      if (t.kind == TokenKind::identifier && !member(i) && !names.contains(i)) {
        if (dependency(i))
          text += device_name(t.text);
        else
          text += t.text;
        continue;
      }
      text += t.text;
    }
    fn_state_[name] = true;
    functions_.push_back({name, false, std::move(text)});
  }

  bool member(std::size_t i) const {
    while (i > 0) {
      --i;
      if (!toks_[i].is_trivia())
        return toks_[i].is_punct(".") || toks_[i].is_punct("->");
    }
    return false;
  }

  // Records what identifier `i` of a hoisted function needs; true when it
  // names a function that is hoisted too.
  bool dependency(std::size_t i) {
    const std::string &id = toks_[i].text;
    const cfront::Ast &ast = prog_.ast;
    std::size_t prev = i;
    while (prev > 0 && toks_[prev - 1].is_trivia())
      --prev;
    if (prev > 0 && toks_[prev - 1].kind == TokenKind::keyword &&
        (toks_[prev - 1].text == "struct" || toks_[prev - 1].text == "union" ||
         toks_[prev - 1].text == "enum")) {
      type(ast.type_declaration(toks_[prev - 1].text + " " + id));
      return false;
    }
    if (ast.macro(id))
      return false;
    if (auto vd = ast.lookup(id, i)) {
      if (vd->declarator->is_function) {
        if (!ast.find_function(id))
          fail("E_UNSUPPORTED",
               "call to '" + id + "', which has no definition in this file",
               prog_.location(i));
        function(id);
        return true;
      }
      if (vd->origin == cfront::DeclOrigin::global)
        fail("E_UNSUPPORTED",
             "device function uses global variable '" + id + "'",
             prog_.location(i));
      for (const std::string &ref : vd->type->referenced_types)
        type(ast.type_declaration(ref));
      return false;
    }
    if (const auto *e = ast.enumerator(id)) {
      type(e);
      return false;
    }
    if (const auto *d = ast.type_declaration(id)) {
      type(d);
      return false;
    }
    std::size_t next = cfront::next_significant(toks_, i + 1);
    if (next < toks_.size() && toks_[next].is_punct("(") && !is_builtin_function(id))
      fail("E_UNSUPPORTED",
           "call to '" + id + "', which has no definition in this file",
           prog_.location(i));
    return false;
  }
};

} // namespace

std::vector<HoistedDecl> hoist_declarations(const ScopeBindings &scope,
                                            const Program &prog) {
  Hoister h(prog);
  for (const Binding &b : scope.bindings)
    h.root(b);
  return h.result();
}

} // namespace accb::translate
