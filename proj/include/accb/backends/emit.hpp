#pragma once

#include "accb/backends/profile.hpp"
#include "accb/translate/translate.hpp"

#include <span>
#include <string>

namespace accb::backends {

/// `void name(params)` with the target's qualifiers. Serial kernels take
/// the block/thread coordinates explicitly and scratch arrays instead of
/// partials.
std::string kernel_signature(const translate::KernelSpec &spec,
                             const TargetProfile &profile);

/// Serial only: the procedure looping over blocks and threads.
std::string launcher_signature(const translate::KernelSpec &spec,
                               const TargetProfile &profile);

/// Kernel definition; for serial, followed by its launcher.
std::string emit_kernel(const translate::KernelSpec &spec, const TargetProfile &profile);

std::string emit_device_function(const translate::HoistedDecl &decl,
                                 const TargetProfile &profile);

/// Prototypes of every generated procedure the host code calls.
std::string emit_forward_declarations(std::span<const translate::KernelSpec> kernels,
                                      const TargetProfile &profile);

/// Runtime helpers: acc_alloc, acc_copy_h2d, acc_copy_d2h, acc_free,
/// acc_sync, acc_map/acc_unmap, acc_present_lookup and the reduction
/// partials helpers. `sidecar_file` is embedded by the OpenCL runtime.
std::string emit_host_runtime(const TargetProfile &profile,
                              std::string_view sidecar_file = {});

/// Head of the OpenCL kernel file: extensions and math name mapping.
std::string opencl_device_prelude();

} // namespace accb::backends
