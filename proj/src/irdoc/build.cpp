#include "accb/irdoc/ir.hpp"

#include "accb/cfront/ast.hpp"

#include <map>

namespace accb::irdoc {

using cfront::Token;
using cfront::TokenKind;

bool operator==(const PragmaTag &a, const PragmaTag &b) {
  return a.directive.text == b.directive.text &&
         a.directive.location == b.directive.location &&
         a.directive.token == b.directive.token &&
         a.directive.attached == b.directive.attached && a.children == b.children;
}

bool operator==(const ForLoopTag &a, const ForLoopTag &b) {
  return a.header == b.header && a.init == b.init && a.cond == b.cond &&
         a.step == b.step && a.governor == b.governor && a.location == b.location &&
         a.token == b.token && a.body == b.body;
}

bool operator==(const IrTag &a, const IrTag &b) { return a.node == b.node; }

namespace {

class Builder {
public:
  Builder(const cfront::NormalizedSource &src,
          std::span<const accvalidate::DirectiveNode> directives)
      : src_(src), toks_(src.tokens) {
    for (const auto &d : directives) {
      at_[d.token] = &d;
      if (d.kind == accvalidate::DirectiveKind::loop && !d.attached.empty())
        governed_[d.attached.begin] = d.text;
    }
  }

  std::vector<IrTag> build(std::size_t b, std::size_t e) {
    std::vector<IrTag> out;
    std::string text;
    auto flush = [&] {
      if (!text.empty())
        out.push_back(IrTag{CCodeTag{std::move(text)}});
      text.clear();
    };
    std::size_t i = b;
    while (i < e) {
      const Token &t = toks_[i];
      if (t.is_acc_pragma()) {
        auto it = at_.find(i);
        if (it == at_.end())
          fail("E_INTERNAL", "directive without a scanned node",
               src_.original_location(i + 1));
        const auto &d = *it->second;
        std::size_t end = d.attached.empty() ? i + 1 : d.attached.end;
        if (end > e || (!d.attached.empty() && d.attached.begin <= i))
          fail("E_INTERNAL", "cannot locate the statement governed by a directive",
               d.location);
        flush();
        out.push_back(IrTag{PragmaTag{d, build(i + 1, end)}});
        i = end;
      } else if (t.is_keyword("for")) {
        flush();
        out.push_back(IrTag{loop(i)});
        i = cfront::statement_end(toks_, i);
      } else {
        text += t.text;
        ++i;
      }
    }
    flush();
    return out;
  }

private:
  const cfront::NormalizedSource &src_;
  std::span<const Token> toks_;
  std::map<std::size_t, const accvalidate::DirectiveNode *> at_;
  std::map<std::size_t, std::string> governed_;

  ForLoopTag loop(std::size_t kw) {
    std::size_t open = cfront::next_significant(toks_, kw + 1);
    std::size_t close = cfront::matching_close(toks_, open);
    std::size_t end = cfront::statement_end(toks_, kw);
    ForLoopTag f;
    f.header = cfront::raw_text(toks_, {kw, close + 1});
    // Header parts are separated by the two `;` at parenthesis depth 1.
    std::vector<std::size_t> semis;
    int depth = 0;
    for (std::size_t k = open + 1; k < close; ++k) {
      const Token &u = toks_[k];
      if (u.is_punct("(") || u.is_punct("[") || u.is_punct("{"))
        ++depth;
      else if (u.is_punct(")") || u.is_punct("]") || u.is_punct("}"))
        --depth;
      else if (depth == 0 && u.is_punct(";"))
        semis.push_back(k);
    }
    if (semis.size() != 2)
      fail("E_INTERNAL", "malformed for header", src_.original_location(kw + 1));
    f.init = cfront::span_text(toks_, {open + 1, semis[0]});
    f.cond = cfront::span_text(toks_, {semis[0] + 1, semis[1]});
    f.step = cfront::span_text(toks_, {semis[1] + 1, close});
    if (auto g = governed_.find(kw); g != governed_.end())
      f.governor = g->second;
    f.location = src_.original_location(kw + 1);
    f.token = kw;
    f.body = build(close + 1, end);
    return f;
  }
};

void render_into(std::span<const IrTag> tags, std::string &out) {
  for (const IrTag &t : tags) {
    if (const auto *c = t.ccode()) {
      out += c->text;
    } else if (const auto *p = t.pragma()) {
      out += p->directive.text;
      render_into(p->children, out);
    } else if (const auto *f = t.forloop()) {
      out += f->header;
      render_into(f->body, out);
    }
  }
}

void count_into(std::span<const IrTag> tags, TagCounts &c) {
  for (const IrTag &t : tags) {
    if (t.ccode()) {
      ++c.ccode;
    } else if (const auto *p = t.pragma()) {
      ++c.pragma;
      count_into(p->children, c);
    } else if (const auto *f = t.forloop()) {
      ++c.forloop;
      count_into(f->body, c);
    }
  }
}

} // namespace

IrDocument build_intermediate(const cfront::NormalizedSource &src,
                              std::span<const accvalidate::DirectiveNode> directives) {
  try {
    return IrDocument{Builder(src, directives).build(0, src.tokens.size())};
  } catch (const CompileError &e) {
    if (e.code() == "E_INTERNAL")
      throw;
    throw CompileError({Severity::error, "E_INTERNAL",
                        "intermediate form: " + e.diagnostic().message,
                        e.diagnostic().location});
  }
}

std::string render(std::span<const IrTag> tags) {
  std::string out;
  render_into(tags, out);
  return out;
}

TagCounts count_tags(const IrDocument &doc) {
  TagCounts c;
  count_into(doc.tags, c);
  return c;
}

} // namespace accb::irdoc
