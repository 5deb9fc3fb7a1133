#include "accb/driver/driver.hpp"

#include "accb/process.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

namespace accb::driver {

namespace fs = std::filesystem;
using backends::Target;

namespace {

fs::path beside_input(const DriverConfig &cfg, const std::string &name) {
  return cfg.input.parent_path() / name;
}

std::string stem(const DriverConfig &cfg) { return cfg.input.stem().string(); }

void write_file(const fs::path &p, std::string_view text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
  if (!out)
    fail("E_IO", "cannot write '" + p.string() + "'");
}

} // namespace

fs::path generated_path(const DriverConfig &cfg) {
  if (cfg.src_only && cfg.output)
    return *cfg.output;
  return beside_input(cfg, backends::output_name(stem(cfg), cfg.target));
}

fs::path sidecar_path(const DriverConfig &cfg) {
  if (cfg.target != Target::opencl)
    return {};
  fs::path gen = generated_path(cfg);
  if (cfg.src_only && cfg.output)
    return fs::path(gen).replace_extension(".cl");
  return beside_input(cfg, backends::sidecar_name(stem(cfg), cfg.target));
}

fs::path artifact_path(const DriverConfig &cfg) {
  if (!cfg.src_only && cfg.output)
    return *cfg.output;
  return beside_input(cfg, stem(cfg));
}

std::vector<std::string> compiler_command(const DriverConfig &cfg,
                                          const fs::path &generated) {
  std::vector<std::string> cmd;
  std::string artifact = artifact_path(cfg).string();
  if (cfg.target == Target::cuda) {
    cmd = {cfg.device_compiler, generated.string(), "-o", artifact};
  } else {
    // The generated program is C; the host compiler may be a C++ driver.
    cmd = {cfg.host_compiler, "-x", "c", generated.string(), "-x", "none", "-o", artifact,
           cfg.target == Target::opencl ? "-lOpenCL" : "-lm"};
  }
  cmd.insert(cmd.end(), cfg.passthrough.begin(), cfg.passthrough.end());
  return cmd;
}

fs::path invoke_system_compiler(const DriverConfig &cfg, const fs::path &generated) {
  auto cmd = compiler_command(cfg, generated);
  if (!find_program(cmd[0]))
    fail("E_NOCC", "compiler '" + cmd[0] + "' not found");
  auto r = run_process(cmd);
  if (!r)
    fail("E_NOCC", "compiler '" + cmd[0] + "' could not be started");
  if (r->status != 0)
    fail("E_CC", "'" + cmd[0] + "' failed:\n" + r->err);
  return artifact_path(cfg);
}

TranslationReport report(const translate::Translation &t) {
  TranslationReport r;
  for (const auto &lr : t.regions) {
    r.regions.push_back({lr.id, lr.kind, lr.location, lr.counts});
    r.totals += lr.counts;
  }
  return r;
}

std::string format_report(const TranslationReport &r, Target target) {
  std::ostringstream s;
  s << "== translation report ==\n";
  s << "target: " << backends::to_string(target) << "\n";
  s << "regions: " << r.regions.size() << "\n";
  for (const auto &row : r.regions) {
    const auto &c = row.counts;
    s << "region " << row.region << ": " << accvalidate::to_string(row.kind) << " at line "
      << row.location.line << ", launches " << c.launches << ", h2d " << c.h2d << ", d2h "
      << c.d2h << ", alloc " << c.allocs << ", reductions " << c.reductions << "\n";
  }
  const auto &c = r.totals;
  s << "launches: " << c.launches << "\n";
  s << "h2d: " << c.h2d << "\n";
  s << "d2h: " << c.d2h << "\n";
  s << "alloc: " << c.allocs << "\n";
  s << "reductions: " << c.reductions << "\n";
  s << "reduction-overhead: alloc " << c.partials_allocs << ", d2h " << c.partials_d2h
    << "\n";
  return s.str();
}

int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
  // Everything after `--` goes to the system compiler untouched.
  std::vector<std::string> args;
  DriverConfig cfg;
  bool passthrough = false;
  for (int i = 1; i < argc; ++i) {
    std::string a = argv[i];
    if (passthrough)
      cfg.passthrough.push_back(a);
    else if (a == "--")
      passthrough = true;
    else
      args.push_back(a);
  }

  CLI::App app{"OpenACC to CUDA/OpenCL/serial C source translator", "accb"};
  std::string input, target, output;
  app.add_option("input", input, "C source file with OpenACC directives")->required();
  app.add_option("--target", target, "cuda, opencl or serial (default: $ACCB_TARGET, else cuda)");
  app.add_option("-o", output, "compiled artifact; with --src-only, the generated source");
  app.add_flag("--src-only", cfg.src_only, "stop after writing the generated source");
  app.add_flag("--keep-ir", cfg.keep_ir, "write the intermediate document as <stem>.accir.xml");
  app.add_option("--device-compiler", cfg.device_compiler, "compiler for the cuda target")
      ->capture_default_str();
  app.add_option("--host-compiler", cfg.host_compiler,
                 "compiler for the opencl and serial targets")
      ->capture_default_str();
  app.add_flag("--verbose", cfg.verbose, "print the translation report");

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp &) {
    out << app.help();
    return exit_ok;
  } catch (const CLI::ParseError &e) {
    err << "accb: " << e.what() << "\n" << "run 'accb --help' for usage\n";
    return exit_usage;
  }

  if (target.empty())
    if (const char *env = std::getenv("ACCB_TARGET"))
      target = env;
  if (!target.empty()) {
    auto t = backends::parse_target(target);
    if (!t) {
      err << "accb: --target: unknown target '" << target
          << "' (expected cuda, opencl or serial)\n";
      return exit_usage;
    }
    cfg.target = *t;
  }
  cfg.input = input;
  if (!output.empty())
    cfg.output = output;

  std::string file = cfg.input.string();
  std::ifstream in(cfg.input, std::ios::binary);
  if (!in) {
    err << format_diagnostic({Severity::error, "E_IO", "cannot read input file", {}}, file)
        << "\n";
    return exit_diagnostics;
  }
  std::stringstream ss;
  ss << in.rdbuf();
  std::string source = ss.str();

  std::vector<Diagnostic> diags;
  auto prog = translate::analyze(source, diags);
  for (const auto &d : diags)
    err << format_diagnostic(d, file) << "\n";
  if (!prog)
    return exit_diagnostics;

  fs::path generated = generated_path(cfg);
  fs::path sidecar = sidecar_path(cfg);
  translate::Translation t;
  try {
    t = translate::translate(*prog, cfg.target, sidecar.filename().string());
    write_file(generated, t.output);
    if (!sidecar.empty())
      write_file(sidecar, t.sidecar);
    if (cfg.keep_ir)
      write_file(beside_input(cfg, stem(cfg) + ".accir.xml"), irdoc::serialize_ir(prog->ir));
  } catch (const CompileError &e) {
    err << format_diagnostic(e.diagnostic(), file) << "\n";
    return exit_diagnostics;
  }
  if (cfg.verbose) {
    out << format_report(report(t), cfg.target);
    out << "output: " << generated.string() << "\n";
    if (!sidecar.empty())
      out << "kernels: " << sidecar.string() << "\n";
  }
  if (cfg.src_only)
    return exit_ok;

  try {
    if (cfg.verbose) {
      std::string line;
      for (const auto &a : compiler_command(cfg, generated))
        line += (line.empty() ? "" : " ") + a;
      err << "accb: " << line << "\n";
    }
    fs::path artifact = invoke_system_compiler(cfg, generated);
    if (cfg.verbose)
      out << "artifact: " << artifact.string() << "\n";
  } catch (const CompileError &e) {
    err << format_diagnostic(e.diagnostic(), file) << "\n";
    return exit_compiler;
  }
  return exit_ok;
}

} // namespace accb::driver
