#include "accb/backends/execute.hpp"

#include "accb/diagnostic.hpp"
#include "accb/process.hpp"

#include <filesystem>
#include <fstream>

namespace accb::backends {

namespace fs = std::filesystem;

ExecResult execute_serial(std::string_view source, std::string_view compiler,
                          const std::vector<std::string> &args) {
  fs::path dir = make_temp_dir("accb-exec");
  struct Cleanup {
    fs::path dir;
    ~Cleanup() {
      std::error_code ec;
      fs::remove_all(dir, ec);
    }
  } cleanup{dir};

  fs::path src = dir / "program.c", exe = dir / "program";
  {
    std::ofstream out(src, std::ios::binary);
    out << source;
  }
  auto cc = run_process({std::string(compiler), "-x", "c", "-w", src.string(), "-x",
                         "none", "-o", exe.string(), "-lm"});
  if (!cc)
    fail("E_NOCC", "cannot run compiler '" + std::string(compiler) + "'");
  if (cc->status != 0)
    fail("E_CC", "compiler failed:\n" + cc->err);

  std::vector<std::string> argv{exe.string()};
  argv.insert(argv.end(), args.begin(), args.end());
  auto run = run_process(argv);
  if (!run)
    fail("E_RUN", "cannot start the compiled program");
  if (run->status != 0)
    fail("E_RUN", "program exited with status " + std::to_string(run->status) +
                      (run->err.empty() ? "" : ":\n" + run->err));
  return {run->status, run->out};
}

} // namespace accb::backends
