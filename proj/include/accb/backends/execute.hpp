#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace accb::backends {

struct ExecResult {
  int status = 0;
  std::string output;
};

/// Compiles the C program `source` with `compiler` and runs it with `args`.
/// Throws E_CC carrying the compiler's messages, E_NOCC when the compiler
/// cannot be started and E_RUN when the program exits with a nonzero status.
ExecResult execute_serial(std::string_view source, std::string_view compiler = "cc",
                          const std::vector<std::string> &args = {});

} // namespace accb::backends
