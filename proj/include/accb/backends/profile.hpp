#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

namespace accb::backends {

enum class Target { cuda, opencl, serial };

std::string_view to_string(Target t);
std::optional<Target> parse_target(std::string_view name);

/// Target-specific spellings used when rendering kernels and host code.
/// Placeholders `{type}`, `{name}` and `{size}` appear in scratch_decl.
struct TargetProfile {
  Target target = Target::cuda;
  std::string kernel_qualifier;     // precedes `void` on kernel definitions
  std::string device_fn_qualifier;  // prefix for hoisted device functions
  std::string global_ptr_qualifier; // prefix for pointer kernel parameters
  std::array<std::string, 2> local_id;    // thread index within the block
  std::array<std::string, 2> group_id;    // block index within the grid
  std::array<std::string, 2> local_size;  // block extent
  std::array<std::string, 2> num_groups;  // grid extent
  std::string barrier;
  std::string scratch_decl;
  std::string handle_type;   // host-side device buffer handle
  std::string env_expr;      // context handle passed first to runtime helpers
  std::string launch_marker; // text identifying a launch site in host code
  std::string output_suffix; // appended to the input stem
  std::string sidecar_suffix; // empty when kernels live in the main output
};

const TargetProfile &profile(Target t);

/// `x.c` -> `x_ipmacc.cu` etc. `stem` is the input file name without its
/// final extension.
std::string output_name(std::string_view stem, Target t);
std::string sidecar_name(std::string_view stem, Target t);

/// `name(args)` with the profile's context handle prepended.
std::string runtime_call(const TargetProfile &p, std::string_view name,
                         std::string_view args);

} // namespace accb::backends
