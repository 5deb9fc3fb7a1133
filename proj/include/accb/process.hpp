#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace accb {

struct ProcessResult {
  int status = -1; // exit status, or 128 + signal number
  std::string out;
  std::string err;
};

/// Runs `argv` (argv[0] searched on PATH) with stdin from /dev/null and
/// both output streams captured. Returns nullopt if it could not be started.
std::optional<ProcessResult> run_process(const std::vector<std::string> &argv);

/// Resolves a command name through PATH; names containing '/' are checked
/// directly.
std::optional<std::filesystem::path> find_program(std::string_view name);

/// Fresh directory under the system temporary directory.
std::filesystem::path make_temp_dir(std::string_view prefix = "accb");

} // namespace accb
