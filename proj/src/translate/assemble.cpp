#include "accb/backends/emit.hpp"
#include "accb/translate/translate.hpp"

#include <algorithm>

namespace accb::translate {

using accvalidate::DirectiveKind;
using backends::Target;
using backends::TargetProfile;

namespace {

// Replaces `call` in `text` with `block`, indenting the block's later lines
// to the call's column.
std::string splice(const std::string &text, const std::string &call,
                   const std::string &block) {
  auto at = text.find(call);
  if (at == std::string::npos)
    fail("E_INTERNAL", "placeholder " + call + " not found");
  auto line = text.rfind('\n', at);
  line = line == std::string::npos ? 0 : line + 1;
  std::string pad = text.substr(line, at - line);
  if (pad.find_first_not_of(" \t") != std::string::npos)
    pad.clear();
  std::string b = block;
  if (!b.empty() && b.back() == '\n')
    b.pop_back();
  std::string indented;
  for (char c : b) {
    indented += c;
    if (c == '\n')
      indented += pad;
  }
  return text.substr(0, at) + indented + text.substr(at + call.size());
}

class Lowerer {
public:
  Lowerer(const Program &prog, const TargetProfile &profile)
      : prog_(prog), profile_(profile) {}

  Translation out;

  std::string region(int id, const DataEnv &env) {
    const irdoc::Region &r = prog_.reverted.table.regions[id];
    ScopeBindings scope = resolve_scope(r, prog_);
    LoweredData data = lower_data_clauses(r, scope, env, prog_, profile_);

    LoweredRegion lr;
    lr.id = id;
    lr.kind = r.kind;
    lr.location = r.directive().location;
    std::string body;
    if (r.kind == DirectiveKind::data) {
      body = irdoc::render(r.body);
      lr.own_text = data.prologue + data.epilogue;
      std::size_t slot = out.regions.size();
      out.regions.push_back(lr);
      for (int nested : r.nested)
        body = splice(body, irdoc::dummy_call(nested), region(nested, data.env));
      std::string block = "{\n" + data.prologue + body + "\n" + data.epilogue + "}\n";
      out.regions[slot].counts = count_sites(out.regions[slot].own_text, profile_);
      out.regions[slot].block = block;
      return block;
    }

    for (auto &h : hoist_declarations(scope, prog_)) {
      bool seen = false;
      for (const auto &x : out.hoisted)
        seen = seen || (x.name == h.name && x.is_type == h.is_type);
      if (!seen)
        out.hoisted.push_back(std::move(h));
    }
    auto units = kernel_units(r, prog_);
    std::string launches;
    for (std::size_t k = 0; k < units.size(); ++k) {
      std::string name = "__accb_kernel_" + std::to_string(id);
      if (units.size() > 1)
        name += "_" + std::to_string(k);
      LaunchGeometry geom = map_parallelism(units[k], prog_);
      KernelSpec spec = construct_kernel(units[k], scope, geom, prog_, name);
      spec.region_id = id;
      for (auto &p : spec.params) {
        if (p.kind != KernelParam::Kind::array)
          continue;
        auto it = data.env.arrays.find(p.name);
        if (it == data.env.arrays.end())
          fail("E_NOCLAUSE",
               "array '" + p.name + "' is used in a kernels region but named in no data clause",
               first_use(scope, p.name));
        p.host_arg = it->second.handle;
      }
      launches += lower_kernel_launch(spec, profile_);
      lr.kernels.push_back(spec.name);
      out.kernels.push_back(std::move(spec));
    }
    lr.own_text = data.prologue + launches + data.epilogue;
    lr.counts = count_sites(lr.own_text, profile_);
    lr.block = "{\n" + lr.own_text + "}\n";
    out.regions.push_back(lr);
    return lr.block;
  }

private:
  const Program &prog_;
  const TargetProfile &profile_;

  SourceLocation first_use(const ScopeBindings &scope, const std::string &name) const {
    const Binding *b = scope.find(name);
    if (b && !b->uses.empty())
      return prog_.location(b->uses.front());
    return {};
  }
};

std::size_t text_offset(std::span<const cfront::Token> toks, std::size_t token) {
  std::size_t n = 0;
  for (std::size_t i = 0; i < token && i < toks.size(); ++i)
    n += toks[i].text.size();
  return n;
}

bool is_define(std::string_view line) {
  std::size_t i = line.find('#') + 1;
  while (i < line.size() && (line[i] == ' ' || line[i] == '\t'))
    ++i;
  return line.substr(i).starts_with("define");
}

} // namespace

Translation translate(const Program &prog, Target target, std::string_view sidecar_file) {
  const TargetProfile &profile = backends::profile(target);
  Lowerer lower(prog, profile);
  const auto &table = prog.reverted.table;

  std::string host = prog.reverted.host;
  for (const auto &r : table.regions)
    if (!r.parent)
      host = splice(host, irdoc::dummy_call(r.id), lower.region(r.id, DataEnv{}));

  Translation out = std::move(lower.out);
  std::sort(out.regions.begin(), out.regions.end(),
            [](const LoweredRegion &a, const LoweredRegion &b) { return a.id < b.id; });

  // Forward declarations go right before the first function holding a
  // region; everything above it is untouched host text.
  std::size_t split = 0;
  if (!table.empty())
    if (const auto *f = prog.ast.find_function(table.regions[0].function))
      split = text_offset(prog.tokens(), f->span.begin);

  std::string device;
  for (const auto &h : out.hoisted)
    if (!h.is_type || target == Target::opencl)
      device += backends::emit_device_function(h, profile) + "\n";
  for (const auto &k : out.kernels)
    device += backends::emit_kernel(k, profile) + "\n";

  std::string text;
  text += std::string(runtime_begin) + "\n";
  text += backends::emit_host_runtime(profile, sidecar_file);
  text += std::string(runtime_end) + "\n\n";
  text += host.substr(0, split);
  text += std::string(forward_begin) + "\n";
  text += backends::emit_forward_declarations(out.kernels, profile);
  text += std::string(forward_end) + "\n\n";
  text += host.substr(split);
  if (target == Target::opencl) {
    std::string cl = std::string(device_begin) + "\n" + backends::opencl_device_prelude();
    for (const auto &t : prog.tokens())
      if (t.kind == cfront::TokenKind::directive_line && is_define(t.text))
        cl += t.text + (t.text.ends_with("\n") ? "" : "\n");
    cl += "\n" + device;
    out.sidecar = std::move(cl);
  } else if (!out.kernels.empty() || !device.empty()) {
    if (!text.ends_with("\n"))
      text += "\n";
    text += "\n" + std::string(device_begin) + "\n" + device;
  }
  if (text.find("__accb_region_") != std::string::npos)
    fail("E_INTERNAL", "a region placeholder was left in the output");
  out.output = std::move(text);
  return out;
}

} // namespace accb::translate
