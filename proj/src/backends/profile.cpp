#include "accb/backends/profile.hpp"

namespace accb::backends {

std::string_view to_string(Target t) {
  switch (t) {
  case Target::cuda: return "cuda";
  case Target::opencl: return "opencl";
  case Target::serial: return "serial";
  }
  return "?";
}

std::optional<Target> parse_target(std::string_view name) {
  if (name == "cuda")
    return Target::cuda;
  if (name == "opencl")
    return Target::opencl;
  if (name == "serial")
    return Target::serial;
  return std::nullopt;
}

namespace {

TargetProfile make_cuda() {
  TargetProfile p;
  p.target = Target::cuda;
  p.kernel_qualifier = "__global__";
  p.device_fn_qualifier = "__device__";
  p.global_ptr_qualifier = "";
  p.local_id = {"threadIdx.x", "threadIdx.y"};
  p.group_id = {"blockIdx.x", "blockIdx.y"};
  p.local_size = {"blockDim.x", "blockDim.y"};
  p.num_groups = {"gridDim.x", "gridDim.y"};
  p.barrier = "__syncthreads();";
  p.scratch_decl = "__shared__ {type} {name}[{size}];";
  p.handle_type = "acc_handle";
  p.launch_marker = "<<<";
  p.output_suffix = "_ipmacc.cu";
  return p;
}

TargetProfile make_opencl() {
  TargetProfile p;
  p.target = Target::opencl;
  p.kernel_qualifier = "__kernel";
  p.device_fn_qualifier = "";
  p.global_ptr_qualifier = "__global ";
  p.local_id = {"get_local_id(0)", "get_local_id(1)"};
  p.group_id = {"get_group_id(0)", "get_group_id(1)"};
  p.local_size = {"get_local_size(0)", "get_local_size(1)"};
  p.num_groups = {"get_num_groups(0)", "get_num_groups(1)"};
  p.barrier = "barrier(CLK_LOCAL_MEM_FENCE);";
  p.scratch_decl = "__local {type} {name}[{size}];";
  p.handle_type = "acc_handle";
  p.env_expr = "acc_cl_env_get()";
  p.launch_marker = "acc_cl_launch(";
  p.output_suffix = "_ipmacc.c";
  p.sidecar_suffix = "_ipmacc.cl";
  return p;
}

// Device concepts become plain host constructs: the index variables are
// kernel parameters, scratch is a stack array in the launcher and each
// barrier splits the launcher's thread loop into phases.
TargetProfile make_serial() {
  TargetProfile p;
  p.target = Target::serial;
  p.kernel_qualifier = "static";
  p.device_fn_qualifier = "static";
  p.global_ptr_qualifier = "";
  p.local_id = {"threadIdx.x", "threadIdx.y"};
  p.group_id = {"blockIdx.x", "blockIdx.y"};
  p.local_size = {"blockDim.x", "blockDim.y"};
  p.num_groups = {"gridDim.x", "gridDim.y"};
  p.barrier = "/* block barrier: next phase */";
  p.scratch_decl = "{type} {name}[{size}];";
  p.handle_type = "acc_handle";
  p.launch_marker = "__accb_launch_";
  p.output_suffix = "_ipmacc.c";
  return p;
}

} // namespace

const TargetProfile &profile(Target t) {
  static const TargetProfile cuda = make_cuda();
  static const TargetProfile opencl = make_opencl();
  static const TargetProfile serial = make_serial();
  switch (t) {
  case Target::cuda: return cuda;
  case Target::opencl: return opencl;
  case Target::serial: return serial;
  }
  return serial;
}

std::string output_name(std::string_view stem, Target t) {
  return std::string(stem) + profile(t).output_suffix;
}

std::string sidecar_name(std::string_view stem, Target t) {
  const auto &suffix = profile(t).sidecar_suffix;
  return suffix.empty() ? std::string() : std::string(stem) + suffix;
}

std::string runtime_call(const TargetProfile &p, std::string_view name,
                         std::string_view args) {
  std::string s(name);
  s += '(';
  s += p.env_expr;
  if (!p.env_expr.empty() && !args.empty())
    s += ", ";
  s += args;
  s += ')';
  return s;
}

} // namespace accb::backends
