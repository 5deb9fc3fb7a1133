#include "accb/backends/emit.hpp"

namespace accb::backends {

using translate::KernelParam;
using translate::KernelSpec;

namespace {

std::string param(const KernelParam &p, const TargetProfile &profile) {
  if (p.kind == KernelParam::Kind::scalar)
    return p.type + " " + p.name;
  if (!p.extents.empty())
    return profile.global_ptr_qualifier + p.type + " (*" + p.name + ")" + p.extents;
  return profile.global_ptr_qualifier + p.type + " *" + p.name;
}

std::string launcher_name(const KernelSpec &spec, const TargetProfile &profile) {
  std::string s = spec.name;
  s.replace(0, std::string_view("__accb_kernel_").size(), profile.launch_marker);
  return s;
}

std::string scratch(const translate::ReductionSpec &r, int threads,
                    const TargetProfile &profile) {
  std::string s = profile.scratch_decl;
  auto put = [&](std::string_view key, const std::string &value) {
    s.replace(s.find(key), key.size(), value);
  };
  put("{type}", r.type);
  put("{name}", r.scratch);
  put("{size}", std::to_string(threads));
  return s;
}

std::string indent(const std::string &text, const std::string &pad) {
  std::string out;
  bool line_start = true;
  for (char c : text) {
    if (line_start && c != '\n')
      out += pad;
    out += c;
    line_start = c == '\n';
  }
  return out;
}

std::string index_definition(const translate::LoopDim &l, int d,
                             const TargetProfile &p) {
  std::string tid = p.local_id[d] + " + " + p.group_id[d] + " * " + p.local_size[d];
  std::string value;
  if (l.lower == "0" && l.step == 1)
    value = tid;
  else if (l.step > 0)
    value = "(" + l.lower + ") + " + std::to_string(l.step) + " * (" + tid + ")";
  else
    value = "(" + l.lower + ") - " + std::to_string(-l.step) + " * (" + tid + ")";
  return l.index_type + " " + l.index + " = " + value + ";\n";
}

} // namespace

std::string kernel_signature(const KernelSpec &spec, const TargetProfile &profile) {
  std::string s = profile.kernel_qualifier + " void " + spec.name + "(";
  bool first = true;
  auto add = [&](const std::string &p) {
    s += (first ? "" : ", ") + p;
    first = false;
  };
  if (profile.target == Target::serial) {
    add("acc_dim blockIdx");
    add("acc_dim threadIdx");
    add("acc_dim blockDim");
    add("acc_dim gridDim");
  }
  for (const auto &p : spec.params) {
    if (p.kind == KernelParam::Kind::partials && profile.target == Target::serial)
      continue;
    add(param(p, profile));
  }
  if (profile.target == Target::serial)
    for (const auto &r : spec.reductions)
      add(r.type + " *" + r.scratch);
  if (first)
    s += "void";
  return s + ")";
}

std::string launcher_signature(const KernelSpec &spec, const TargetProfile &profile) {
  std::string s = "static void " + launcher_name(spec, profile) +
                  "(acc_dim gridDim, acc_dim blockDim";
  for (const auto &p : spec.params)
    s += ", " + param(p, profile);
  return s + ")";
}

std::string emit_kernel(const KernelSpec &spec, const TargetProfile &profile) {
  const int threads = spec.geometry.threads_per_block();
  std::string body;
  if (profile.target != Target::serial)
    for (const auto &r : spec.reductions)
      body += scratch(r, threads, profile) + "\n";
  for (const auto &l : spec.locals)
    body += l + "\n";
  for (const auto &r : spec.reductions)
    body += r.type + " " + r.var + " = " + r.identity + ";\n";
  for (std::size_t d = 0; d < spec.geometry.loops.size(); ++d)
    body += index_definition(spec.geometry.loops[d], static_cast<int>(d), profile);
  if (spec.guard.empty())
    body += spec.body + "\n";
  else
    body += "if (" + spec.guard + ") " + spec.body + "\n";
  for (const auto &r : spec.reductions)
    body += translate::lower_reduction(spec, r, profile).epilogue;

  std::string out = kernel_signature(spec, profile) + "\n{\n" + indent(body, "  ") + "}\n";
  if (profile.target != Target::serial)
    return out;

  // Blocks outer, threads inner; scratch lives for one block iteration.
  std::string call = spec.name + "(blockIdx, threadIdx, blockDim, gridDim";
  for (const auto &p : spec.params)
    if (p.kind != KernelParam::Kind::partials)
      call += ", " + p.name;
  for (const auto &r : spec.reductions)
    call += ", " + r.scratch;
  call += ");\n";
  std::string block;
  for (const auto &r : spec.reductions)
    block += scratch(r, threads, profile) + "\n";
  block += "for (threadIdx.y = 0; threadIdx.y < blockDim.y; ++threadIdx.y)\n"
           "  for (threadIdx.x = 0; threadIdx.x < blockDim.x; ++threadIdx.x)\n    " +
           call;
  for (const auto &r : spec.reductions)
    block += translate::lower_reduction(spec, r, profile).block_merge;

  out += "\n" + launcher_signature(spec, profile) + "\n{\n"
         "  acc_dim blockIdx, threadIdx;\n"
         "  for (blockIdx.y = 0; blockIdx.y < gridDim.y; ++blockIdx.y)\n"
         "    for (blockIdx.x = 0; blockIdx.x < gridDim.x; ++blockIdx.x) {\n" +
         indent(block, "      ") + "    }\n}\n";
  return out;
}

std::string emit_device_function(const translate::HoistedDecl &decl,
                                 const TargetProfile &profile) {
  if (decl.is_type || profile.device_fn_qualifier.empty())
    return decl.text + "\n";
  return profile.device_fn_qualifier + " " + decl.text + "\n";
}

std::string emit_forward_declarations(std::span<const KernelSpec> kernels,
                                      const TargetProfile &profile) {
  std::string out;
  if (profile.target == Target::opencl)
    return out; // kernels are looked up by name at run time
  for (const auto &k : kernels) {
    if (profile.target == Target::serial)
      out += launcher_signature(k, profile) + ";\n";
    else
      out += kernel_signature(k, profile) + ";\n";
  }
  return out;
}

std::string opencl_device_prelude() {
  std::string s = "#pragma OPENCL EXTENSION cl_khr_fp64 : enable\n";
  // OpenCL C overloads the generic names; map the C99 float variants.
  static constexpr std::string_view names[] = {
      "sqrt", "fabs", "exp", "exp2", "log", "log2", "log10", "pow", "sin", "cos",
      "tan", "asin", "acos", "atan", "atan2", "sinh", "cosh", "tanh", "floor",
      "ceil", "fmin", "fmax", "fmod", "round", "trunc", "hypot", "cbrt"};
  for (auto n : names)
    s += "#define " + std::string(n) + "f " + std::string(n) + "\n";
  return s;
}

} // namespace accb::backends
