#include "accb/irdoc/ir.hpp"

#include "accb/cfront/ast.hpp"

#include <cctype>

namespace accb::irdoc {

std::string dummy_name(int id) { return "__accb_region_" + std::to_string(id); }
std::string dummy_call(int id) { return dummy_name(id) + "();"; }

const Region *RegionTable::find(std::string_view name) const {
  for (const Region &r : regions)
    if (r.dummy_name == name)
      return &r;
  return nullptr;
}

namespace {

using accvalidate::DirectiveKind;

class Reverter {
public:
  Reverted run(const IrDocument &doc) {
    Reverted out;
    std::vector<accvalidate::DirectiveNode> stack;
    std::vector<IrTag> host = strip(doc.tags, std::nullopt, stack);
    out.host = render(host);
    out.table = std::move(table_);
    return out;
  }

private:
  RegionTable table_;

  static bool is_region(const PragmaTag &p) {
    return p.directive.kind == DirectiveKind::data ||
           p.directive.kind == DirectiveKind::kernels;
  }

  // Copy of `tags` with every region construct replaced by its dummy call.
  // Regions are numbered before their bodies are visited (pre-order).
  std::vector<IrTag> strip(const std::vector<IrTag> &tags, std::optional<int> parent,
                           std::vector<accvalidate::DirectiveNode> &stack) {
    std::vector<IrTag> out;
    for (const IrTag &t : tags) {
      if (const auto *p = t.pragma(); p && is_region(*p)) {
        int id = static_cast<int>(table_.regions.size());
        table_.regions.emplace_back();
        stack.push_back(p->directive);
        {
          Region &r = table_.regions[id];
          r.id = id;
          r.kind = p->directive.kind;
          r.dummy_name = dummy_name(id);
          r.directives = stack;
          r.parent = parent;
        }
        if (parent)
          table_.regions[*parent].nested.push_back(id);
        std::vector<IrTag> body = strip(p->children, id, stack);
        table_.regions[id].body = std::move(body);
        stack.pop_back();
        out.push_back(IrTag{CCodeTag{dummy_call(id)}});
      } else if (const auto *p = t.pragma()) {
        PragmaTag copy{p->directive, strip(p->children, parent, stack)};
        out.push_back(IrTag{std::move(copy)});
      } else if (const auto *f = t.forloop()) {
        ForLoopTag copy = *f;
        copy.body = strip(f->body, parent, stack);
        out.push_back(IrTag{std::move(copy)});
      } else {
        out.push_back(t);
      }
    }
    return out;
  }
};

} // namespace

Reverted revert(const IrDocument &doc) { return Reverter().run(doc); }

void attach_functions(RegionTable &table, const cfront::Ast &ast) {
  for (Region &r : table.regions)
    if (const auto *f = ast.function_at(r.directive().token))
      r.function = f->name;
}

std::string region_text(const Region &region, const RegionTable &table) {
  return reinline(region.directive().text + render(region.body), table);
}

std::string reinline(std::string_view host, const RegionTable &table) {
  std::string out;
  std::size_t pos = 0;
  const std::string_view prefix = "__accb_region_";
  while (true) {
    std::size_t at = host.find(prefix, pos);
    if (at == std::string_view::npos) {
      out += host.substr(pos);
      return out;
    }
    std::size_t digits = at + prefix.size();
    std::size_t end = digits;
    while (end < host.size() && std::isdigit(static_cast<unsigned char>(host[end])))
      ++end;
    std::string_view call = host.substr(at, end - at);
    const Region *r = end > digits ? table.find(call) : nullptr;
    if (!r || host.substr(end, 3) != "();") {
      out += host.substr(pos, end - pos);
      pos = end;
      continue;
    }
    out += host.substr(pos, at - pos);
    out += region_text(*r, table);
    pos = end + 3;
  }
}

} // namespace accb::irdoc
