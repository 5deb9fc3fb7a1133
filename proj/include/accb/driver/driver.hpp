#pragma once

#include "accb/backends/profile.hpp"
#include "accb/translate/translate.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace accb::driver {

enum ExitCode { exit_ok = 0, exit_diagnostics = 1, exit_usage = 2, exit_compiler = 3 };

struct DriverConfig {
  std::filesystem::path input;
  backends::Target target = backends::Target::cuda;
  /// Compiled artifact, or the generated source with --src-only.
  std::optional<std::filesystem::path> output;
  bool src_only = false;
  bool keep_ir = false;
  bool verbose = false;
  std::string device_compiler = "nvcc";
  std::string host_compiler = "g++";
  std::vector<std::string> passthrough; // arguments after `--`
};

/// Generated source path: `<dir>/<stem>_ipmacc.cu` etc., or `-o` with
/// --src-only.
std::filesystem::path generated_path(const DriverConfig &cfg);
/// OpenCL kernel file next to the generated source; empty for other targets.
std::filesystem::path sidecar_path(const DriverConfig &cfg);
/// Compiled artifact: `-o`, else the input stem next to the input.
std::filesystem::path artifact_path(const DriverConfig &cfg);

/// Command line the system compiler is run with.
std::vector<std::string> compiler_command(const DriverConfig &cfg,
                                          const std::filesystem::path &generated);

/// Runs the system compiler. Throws E_NOCC when it is not on PATH and E_CC
/// with its stderr when it fails. Returns the artifact path.
std::filesystem::path invoke_system_compiler(const DriverConfig &cfg,
                                             const std::filesystem::path &generated);

struct TranslationReport {
  struct Row {
    int region = 0;
    accvalidate::DirectiveKind kind = accvalidate::DirectiveKind::kernels;
    SourceLocation location;
    translate::SiteCounts counts;
  };
  std::vector<Row> regions;
  translate::SiteCounts totals;
};

TranslationReport report(const translate::Translation &t);
std::string format_report(const TranslationReport &r, backends::Target target);

/// Whole command line: parse, translate, write, compile. Returns an ExitCode.
int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

} // namespace accb::driver
