#include "accb/translate/translate.hpp"

#include <bit>

namespace accb::translate {

using accvalidate::ClauseKind;
using accvalidate::ReductionOp;
using backends::Target;
using backends::TargetProfile;

namespace {

std::string combine(ReductionOp op, const std::string &a, const std::string &b) {
  switch (op) {
  case ReductionOp::add: return a + " + " + b;
  case ReductionOp::mul: return a + " * " + b;
  case ReductionOp::max: return a + " > " + b + " ? " + a + " : " + b;
  case ReductionOp::min: return a + " < " + b + " ? " + a + " : " + b;
  default: break;
  }
  fail("E_REDOP", "reduction operator '" + std::string(to_string(op)) +
                      "' cannot be lowered");
}

std::string replace_all(std::string s, std::string_view from, std::string_view to) {
  for (auto p = s.find(from); p != std::string::npos; p = s.find(from, p + to.size()))
    s.replace(p, from.size(), to);
  return s;
}

int first_stride(int threads) {
  return static_cast<int>(std::bit_ceil(static_cast<unsigned>(threads)) / 2);
}

std::string pointer_type(const KernelParam &p) {
  return p.extents.empty() ? p.type + " *" : p.type + " (*)" + p.extents;
}

std::string argument(const KernelParam &p) {
  if (p.kind == KernelParam::Kind::scalar)
    return p.host_arg;
  return "(" + pointer_type(p) + ")" + p.host_arg;
}

} // namespace

LoweredData lower_data_clauses(const irdoc::Region &region,
                               const ScopeBindings &scope, const DataEnv &outer,
                               const Program &prog, const TargetProfile &profile) {
  LoweredData out;
  out.env = outer;
  std::vector<std::string> copy_back, release;
  for (const auto &c : region.directive().clauses) {
    if (!accvalidate::is_data_clause(c.kind))
      continue;
    for (const auto &v : c.vars) {
      bool live = outer.arrays.contains(v.name);
      if (c.kind == ClauseKind::present) {
        if (!live)
          fail("E_PRESENT",
               "'" + v.name + "' is not allocated by an enclosing data region",
               v.location);
        std::string handle = v.name + "__dev";
        out.prologue += profile.handle_type + " " + handle + " = " +
                        backends::runtime_call(profile, "acc_present_lookup", v.name) +
                        ";\n";
        out.env.arrays[v.name] = {handle, c.kind};
        continue;
      }
      // Already on the device: behaves as present, no transfers.
      if (live)
        continue;
      const Binding *b = scope.find(v.name);
      auto size = b ? infer_transfer_size(*b, v, prog.ast) : std::nullopt;
      if (!size)
        fail("E_SIZE",
             "size of '" + v.name + "' is unknown; give bounds as " + v.name +
                 "[start:count]",
             v.location);
      std::string handle = v.name + "__dev";
      out.prologue += profile.handle_type + " " + handle + " = " +
                      backends::runtime_call(profile, "acc_alloc", size->alloc) + ";\n";
      out.prologue +=
          backends::runtime_call(profile, "acc_map", v.name + ", " + handle) + ";\n";
      std::string extent = size->bytes + ", " + size->offset;
      if (c.kind == ClauseKind::copy || c.kind == ClauseKind::copyin)
        out.prologue += backends::runtime_call(profile, "acc_copy_h2d",
                                               handle + ", " + v.name + ", " + extent) +
                        ";\n";
      if (c.kind == ClauseKind::copy || c.kind == ClauseKind::copyout)
        copy_back.push_back(backends::runtime_call(
                                profile, "acc_copy_d2h",
                                v.name + ", " + handle + ", " + extent) +
                            ";\n");
      release.insert(release.begin(),
                     backends::runtime_call(profile, "acc_unmap", v.name) + ";\n" +
                         backends::runtime_call(profile, "acc_free", handle) + ";\n");
      out.env.arrays[v.name] = {handle, c.kind};
    }
  }
  for (const auto &s : copy_back)
    out.epilogue += s;
  for (const auto &s : release)
    out.epilogue += s;
  return out;
}

ReductionLowering lower_reduction(const KernelSpec &spec, const ReductionSpec &red,
                                  const TargetProfile &profile) {
  ReductionLowering out;
  const int threads = spec.geometry.threads_per_block();
  const int stride = first_stride(threads);
  const std::string n = std::to_string(threads);
  const auto &p = profile;
  const std::string tid = p.local_id[0] + " + " + p.local_id[1] + " * " + p.local_size[0];
  const std::string slot = red.scratch + "[__accb_tid]";
  const std::string other = red.scratch + "[__accb_tid + __accb_s]";
  const std::string step = "if (__accb_tid < __accb_s && __accb_tid + __accb_s < " + n +
                           ")\n";
  const std::string fold = slot + " = " + combine(red.op, slot, other) + ";\n";

  if (p.target == Target::serial) {
    // The kernel only publishes its value; the launcher runs the tree with
    // each barrier as a split of its thread loop.
    out.epilogue = red.scratch + "[" + tid + "] = " + red.var + ";\n";
    out.block_merge = p.barrier + "\n{\n  int __accb_tid, __accb_s;\n"
                      "  for (__accb_s = " + std::to_string(stride) +
                      "; __accb_s > 0; __accb_s >>= 1) {\n"
                      "    for (__accb_tid = 0; __accb_tid < " + n + "; ++__accb_tid)\n"
                      "      " + step + "        " + fold +
                      "    " + p.barrier + "\n  }\n  " +
                      red.partials + "[blockIdx.x + blockIdx.y * gridDim.x] = " +
                      red.scratch + "[0];\n}\n";
  } else {
    out.epilogue = "{\n  int __accb_tid = " + tid + ";\n  int __accb_s;\n  " + slot +
                   " = " + red.var + ";\n  " + p.barrier + "\n"
                   "  for (__accb_s = " + std::to_string(stride) +
                   "; __accb_s > 0; __accb_s >>= 1) {\n"
                   "    " + step + "      " + fold + "    " + p.barrier + "\n  }\n"
                   "  if (__accb_tid == 0)\n    " + red.partials + "[" + p.group_id[0] +
                   " + " + p.group_id[1] + " * " + p.num_groups[0] + "] = " +
                   red.scratch + "[0];\n}\n";
  }

  const std::string bytes = "(size_t)__accb_nb * sizeof(" + red.type + ")";
  out.host_merge =
      "{\n  " + red.type + " *__accb_p = (" + red.type + " *)" +
      backends::runtime_call(p, "acc_reduction_d2h", red.partials + ", " + bytes) +
      ";\n  int __accb_k;\n"
      "  for (__accb_k = 0; __accb_k < __accb_nb; ++__accb_k)\n    " + red.var +
      " = " + combine(red.op, red.var, "__accb_p[__accb_k]") + ";\n  " +
      backends::runtime_call(p, "acc_reduction_free", red.partials + ", __accb_p") +
      ";\n}\n";
  return out;
}

std::string lower_kernel_launch(const KernelSpec &spec, const TargetProfile &profile) {
  const auto &g = spec.geometry;
  const std::string bx = std::to_string(g.block[0]);
  const std::string by = std::to_string(g.block[1]);

  std::string launch;
  switch (profile.target) {
  case Target::cuda: {
    launch = spec.name + "<<<dim3(__accb_gx, __accb_gy), dim3(" + bx + ", " + by +
             ")>>>(";
    for (std::size_t i = 0; i < spec.params.size(); ++i)
      launch += (i ? ", " : "") + argument(spec.params[i]);
    launch += ");\n";
    break;
  }
  case Target::serial: {
    std::string launcher = spec.name;
    launcher.replace(0, std::string_view("__accb_kernel_").size(),
                     profile.launch_marker);
    launch = launcher + "(acc_dim_make(__accb_gx, __accb_gy), acc_dim_make(" + bx +
             ", " + by + ")";
    for (const auto &p : spec.params)
      launch += ", " + argument(p);
    launch += ");\n";
    break;
  }
  case Target::opencl: {
    std::size_t n = spec.params.size();
    launch = "{\n  size_t __accb_lws[2] = {" + bx + ", " + by + "};\n"
             "  size_t __accb_gws[2] = {(size_t)__accb_gx * " + bx +
             ", (size_t)__accb_gy * " + by + "};\n"
             "  acc_cl_arg __accb_args[" + std::to_string(n ? n : 1) + "] = {";
    if (n == 0)
      launch += "{0, 0}";
    for (std::size_t i = 0; i < n; ++i) {
      const auto &p = spec.params[i];
      launch += i ? ", " : "";
      if (p.kind == KernelParam::Kind::scalar)
        launch += "{sizeof(" + p.host_arg + "), &" + p.host_arg + "}";
      else
        launch += "{sizeof(" + profile.handle_type + "), &" + p.host_arg + "}";
    }
    launch += "};\n  " + profile.launch_marker + profile.env_expr + ", \"" + spec.name +
              "\", " + std::to_string(g.dims) + ", __accb_gws, __accb_lws, " +
              std::to_string(n) + ", __accb_args);\n}\n";
    break;
  }
  }

  std::string body;
  if (!spec.reductions.empty())
    body += "int __accb_nb = __accb_gx * __accb_gy;\n";
  for (const auto &r : spec.reductions)
    body += profile.handle_type + " " + r.partials + " = " +
            backends::runtime_call(profile, "acc_reduction_alloc",
                                   "(size_t)__accb_nb * sizeof(" + r.type + ")") +
            ";\n";
  body += launch;
  body += backends::runtime_call(profile, "acc_sync", "") + ";\n";
  for (const auto &r : spec.reductions)
    body += lower_reduction(spec, r, profile).host_merge;

  std::string out = "{\n  int __accb_gx = " + g.grid[0] + ", __accb_gy = " + g.grid[1] +
                    ";\n  if (__accb_gx > 0 && __accb_gy > 0) {\n";
  std::string indented = "    " + replace_all(body, "\n", "\n    ");
  indented.resize(indented.size() - 4);
  out += indented + "  }\n}\n";
  return out;
}

SiteCounts &SiteCounts::operator+=(const SiteCounts &o) {
  launches += o.launches;
  h2d += o.h2d;
  d2h += o.d2h;
  allocs += o.allocs;
  reductions += o.reductions;
  partials_allocs += o.partials_allocs;
  partials_d2h += o.partials_d2h;
  return *this;
}

SiteCounts count_sites(std::string_view text, const TargetProfile &profile) {
  auto count = [&](std::string_view needle) {
    int n = 0;
    for (auto p = text.find(needle); p != std::string_view::npos;
         p = text.find(needle, p + needle.size()))
      ++n;
    return n;
  };
  SiteCounts c;
  c.launches = count(profile.launch_marker);
  c.h2d = count("acc_copy_h2d(");
  c.d2h = count("acc_copy_d2h(");
  c.allocs = count("acc_alloc(");
  c.partials_allocs = count("acc_reduction_alloc(");
  c.partials_d2h = count("acc_reduction_d2h(");
  c.reductions = c.partials_allocs;
  return c;
}

} // namespace accb::translate
