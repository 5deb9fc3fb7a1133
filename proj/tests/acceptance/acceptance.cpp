// One line per acceptance criterion; exit status 1 if any criterion fails.

#include "accb/backends/execute.hpp"
#include "accb/driver/driver.hpp"
#include "accb/process.hpp"
#include "generators.hpp"
#include "test_util.hpp"
#include "translate_util.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace accb;
using backends::Target;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  enum Kind { pass, fail, skip } kind = pass;
  std::string detail;
};

Outcome failed(std::string why) { return {Outcome::fail, std::move(why)}; }

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(3);
  s << v;
  return s.str();
}

std::vector<fs::path> corpus() {
  std::vector<fs::path> files;
  for (const auto &e : fs::directory_iterator(test::test_dir() / "corpus"))
    if (e.path().extension() == ".c")
      files.push_back(e.path());
  std::sort(files.begin(), files.end());
  return files;
}

std::string translate_to(const std::string &text, Target t, std::string_view sidecar = {}) {
  return translate::translate(test::program(text), t, sidecar).output;
}

// ---- 1 ------------------------------------------------------------------------

Outcome golden_listing() {
  auto t0 = std::chrono::steady_clock::now();
  auto prog = test::program(test::read_file("golden/matmul_listing.c"));
  auto t = translate::translate(prog, Target::cuda);
  auto rep = driver::report(t);
  double secs = seconds_since(t0);
  const auto &c = rep.totals;
  if (c.launches != 1 || c.allocs != 3 || c.h2d != 3 || c.d2h != 3 || c.reductions != 0)
    return failed("report " + driver::format_report(rep, Target::cuda));
  // Structural scan of the emitted text, independent of the report.
  const std::string &o = t.output;
  if (test::count_matches(o, "__global__ void \\w+\\([^;{]*\\)\\s*\\{") != 1)
    return failed("expected exactly one kernel definition");
  std::regex launch(R"((\w+)<<<dim3\(([^,]+), ([^)]+)\), dim3\(16, 16\)>>>\(([^;]*)\);)");
  std::smatch m;
  if (!std::regex_search(o, m, launch))
    return failed("no 2-D launch with block (16,16)");
  if (m[4] != "(float *)a__dev, (float *)b__dev, (float *)c__dev, LEN")
    return failed("launch arguments: " + m[4].str());
  std::string host = test::host_section(o);
  int allocs = test::count_calls(host, "acc_alloc"), h2d = test::count_calls(host, "acc_copy_h2d"),
      d2h = test::count_calls(host, "acc_copy_d2h");
  if (allocs != 3 || h2d != 3 || d2h != 3)
    return failed("scan found alloc/h2d/d2h " + std::to_string(allocs) + "/" +
                  std::to_string(h2d) + "/" + std::to_string(d2h));
  const auto &g = t.kernels.at(0).geometry;
  for (const auto &grid : g.grid)
    if (cfront::evaluate_constant(grid, {{"LEN", 1024}}) != 1024 / 16)
      return failed("grid extent " + grid + " is not ceil(LEN/16)");
  if (secs >= 1.0)
    return failed("took " + fmt(secs) + " s");
  return {Outcome::pass, "1 kernel, grid (" + g.grid[0] + ", " + g.grid[1] +
                             ") = (64, 64) at LEN=1024, block (16,16), args a,b,c,LEN, 3 alloc/h2d/d2h in " +
                             fmt(secs) + " s"};
}

// ---- 2 ------------------------------------------------------------------------

// Exact comparison of integer tokens, 1e-5 relative for floating ones.
std::string compare_outputs(const std::string &want, const std::string &got, double &worst) {
  std::istringstream a(want), b(got);
  std::string x, y;
  while (true) {
    bool ha = static_cast<bool>(a >> x), hb = static_cast<bool>(b >> y);
    if (!ha || !hb)
      return ha == hb ? "" : "output length differs";
    bool floating = x.find_first_of(".eE") != std::string::npos;
    char *end_x, *end_y;
    double vx = std::strtod(x.c_str(), &end_x), vy = std::strtod(y.c_str(), &end_y);
    if (floating && !*end_x && !*end_y) {
      double rel = std::abs(vx - vy) / std::max(std::abs(vx), 1e-30);
      if (vx == vy)
        rel = 0;
      worst = std::max(worst, rel);
      if (rel >= 1e-5)
        return "'" + x + "' vs '" + y + "'";
    } else if (x != y) {
      return "'" + x + "' vs '" + y + "'";
    }
  }
}

Outcome serial_equivalence() {
  if (!find_program("cc"))
    return {Outcome::skip, "no host C compiler"};
  auto t0 = std::chrono::steady_clock::now();
  auto files = corpus();
  if (files.size() < 20)
    return failed("corpus has " + std::to_string(files.size()) + " programs");
  double worst = 0;
  for (const auto &f : files) {
    std::string text = test::read_file(f);
    try {
      auto want = backends::execute_serial(text).output;
      auto got = backends::execute_serial(translate_to(text, Target::serial)).output;
      if (auto diff = compare_outputs(want, got, worst); !diff.empty())
        return failed(f.filename().string() + ": " + diff);
    } catch (const CompileError &e) {
      return failed(f.filename().string() + ": " + e.diagnostic().code + " " +
                    e.diagnostic().message);
    }
  }
  double secs = seconds_since(t0);
  if (secs >= 60)
    return failed("took " + fmt(secs) + " s");
  return {Outcome::pass, std::to_string(files.size()) + " programs equal, worst float rel " +
                             fmt(worst) + ", " + fmt(secs) + " s"};
}

// ---- 3 ------------------------------------------------------------------------

template <class T> std::string initializer(const std::vector<T> &v) {
  std::ostringstream s;
  s.precision(9);
  if constexpr (std::is_floating_point_v<T>)
    s << std::showpoint;
  for (const T &x : v)
    s << x << (std::is_floating_point_v<T> ? "f, " : ", ");
  return s.str();
}

Outcome reduction_oracle() {
  if (!find_program("cc"))
    return {Outcome::skip, "no host C compiler"};
  const int nf = 4096, ni = 1500;
  double worst = 0;
  for (unsigned seed = 1; seed <= 30; ++seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<float> uf(0.0f, 1000.0f);
    std::uniform_int_distribution<int> ui(-100000, 100000);
    std::vector<float> f(nf);
    std::vector<int> v(ni);
    std::vector<long> m(40);
    for (auto &x : f)
      x = uf(rng);
    for (auto &x : v)
      x = ui(rng);
    for (auto &x : m)
      x = std::array<long, 4>{1, -1, 2, 3}[rng() % 4];

    std::string text =
        "#include <stdio.h>\nfloat f[" + std::to_string(nf) + "] = {" + initializer(f) +
        "};\nint v[" + std::to_string(ni) + "] = {" + initializer(v) + "};\nlong m[40] = {" +
        initializer(m) +
        "};\nint main(void) {\n  int i;\n  long s = 0;\n  float fs = 0;\n"
        "  int hi = -2147483647, lo = 2147483647;\n  long p = 1;\n"
        "#pragma acc kernels\n#pragma acc loop independent reduction(+:s)\n"
        "  for (i = 1; i <= 1024; ++i) s += i;\n"
        "#pragma acc data copyin(f, v, m)\n  {\n"
        "#pragma acc kernels\n#pragma acc loop independent reduction(+:fs)\n"
        "    for (i = 0; i < " + std::to_string(nf) + "; ++i) fs += f[i];\n"
        "#pragma acc kernels\n#pragma acc loop independent reduction(max:hi)\n"
        "    for (i = 0; i < " + std::to_string(ni) + "; ++i) hi = v[i] > hi ? v[i] : hi;\n"
        "#pragma acc kernels\n#pragma acc loop independent reduction(min:lo)\n"
        "    for (i = 0; i < " + std::to_string(ni) + "; ++i) lo = v[i] < lo ? v[i] : lo;\n"
        "#pragma acc kernels\n#pragma acc loop independent reduction(*:p)\n"
        "    for (i = 0; i < 40; ++i) p *= m[i];\n  }\n"
        "  printf(\"%ld %.9g %d %d %ld\\n\", s, fs, hi, lo, p);\n  return 0;\n}\n";
    std::istringstream out(backends::execute_serial(translate_to(text, Target::serial)).output);
    long s, p;
    double fs;
    int hi, lo;
    if (!(out >> s >> fs >> hi >> lo >> p))
      return failed("seed " + std::to_string(seed) + ": unreadable output");

    // Oracles: analytic sum and sequential folds over the same data.
    float seq = 0;
    for (float x : f)
      seq += x;
    long want_p = 1;
    for (long x : m)
      want_p *= x;
    double rel = std::abs(fs - seq) / seq;
    worst = std::max(worst, rel);
    if (s != 1024L * 1025 / 2)
      return failed("seed " + std::to_string(seed) + ": sum " + std::to_string(s));
    if (rel >= 1e-5)
      return failed("seed " + std::to_string(seed) + ": float sum rel " + fmt(rel));
    if (hi != *std::max_element(v.begin(), v.end()) || lo != *std::min_element(v.begin(), v.end()))
      return failed("seed " + std::to_string(seed) + ": max/min");
    if (p != want_p)
      return failed("seed " + std::to_string(seed) + ": product " + std::to_string(p));
  }
  return {Outcome::pass, "30 seeds, sum 1..1024 = 524800, worst float rel " + fmt(worst) +
                             ", max/min/* exact"};
}

// ---- 4 ------------------------------------------------------------------------

Outcome exactly_once() {
  if (!find_program("cc"))
    return {Outcome::skip, "no host C compiler"};
  // Hit counters with a guard band on both sides; the program prints every
  // counter and the test checks them.
  std::string text = R"(#include <stdio.h>
#include <stdlib.h>
int main(void) {
  int bounds[6] = {1, 255, 256, 257, 1000, 1024};
  int pad = 64;
  int *hits = (int *)malloc((1024 * 1024 + 2 * pad) * sizeof(int));
  int *h;
  int a, b, i, j, k, n, m;
  h = hits;
  for (a = 0; a < 6; ++a) {
    n = bounds[a];
    for (k = 0; k < n + 2 * pad; ++k) hits[k] = 0;
#pragma acc kernels copy(h[0:n+2*pad])
#pragma acc loop independent
    for (i = 0; i < n; ++i) h[pad + i] += 1;
    printf("1d %d", n);
    for (k = 0; k < n + 2 * pad; ++k) printf(" %d", hits[k]);
    printf("\n");
  }
  for (a = 0; a < 6; ++a)
    for (b = 0; b < 6; ++b) {
      n = bounds[a];
      m = bounds[b];
      for (k = 0; k < n * m + 2 * pad; ++k) hits[k] = 0;
#pragma acc kernels copy(h[0:n*m+2*pad])
#pragma acc loop independent
      for (i = 0; i < n; ++i) {
#pragma acc loop independent
        for (j = 0; j < m; ++j) h[pad + i * m + j] += 1;
      }
      long ones = 0, other = 0;
      for (k = 0; k < n * m + 2 * pad; ++k) {
        int want = k >= pad && k < pad + n * m;
        if (hits[k] == want) ones += want; else ++other;
      }
      printf("2d %d %d %ld %ld\n", n, m, ones, other);
    }
  free(hits);
  return 0;
}
)";
  std::istringstream out(backends::execute_serial(translate_to(text, Target::serial)).output);
  const int pad = 64;
  int cases = 0;
  std::string line;
  while (std::getline(out, line)) {
    std::istringstream in(line);
    std::string kind;
    in >> kind;
    if (kind == "1d") {
      int n;
      in >> n;
      for (int k = 0; k < n + 2 * pad; ++k) {
        int c;
        in >> c;
        int want = k >= pad && k < pad + n;
        if (c != want)
          return failed("1-D bound " + std::to_string(n) + ": index " + std::to_string(k - pad) +
                        " ran " + std::to_string(c) + " times");
      }
    } else {
      long n, m, ones, other;
      in >> n >> m >> ones >> other;
      if (ones != n * m || other != 0)
        return failed("2-D " + std::to_string(n) + "x" + std::to_string(m) + ": " +
                      std::to_string(other) + " counters wrong");
    }
    ++cases;
  }
  if (cases != 6 + 36)
    return failed("ran " + std::to_string(cases) + " of 42 cases");
  return {Outcome::pass, "6 1-D bounds and 36 2-D bound pairs, every index once, guard bands untouched"};
}

// ---- 5 ------------------------------------------------------------------------

Outcome ir_round_trip() {
  int files = 0;
  for (const auto &f : corpus()) {
    auto front = test::front(test::read_file(f));
    auto doc = irdoc::build_intermediate(front.src, front.directives);
    auto rev = irdoc::revert(doc);
    std::string back = irdoc::reinline(rev.host, rev.table);
    auto a = cfront::tokenize(back), b = cfront::tokenize(front.src.text);
    if (a.size() != b.size())
      return failed(f.filename().string() + ": token count differs");
    for (std::size_t i = 0; i < a.size(); ++i)
      if (a[i].text != b[i].text || a[i].kind != b[i].kind)
        return failed(f.filename().string() + ": token " + std::to_string(i) + " differs");
    if (irdoc::deserialize_ir(irdoc::serialize_ir(doc)) != doc)
      return failed(f.filename().string() + ": serialize/deserialize");
    ++files;
  }
  std::mt19937 rng(555);
  for (int k = 0; k < 1000; ++k) {
    auto doc = test::random_ir_document(rng);
    std::string xml = irdoc::serialize_ir(doc);
    auto back = irdoc::deserialize_ir(xml);
    if (back != doc || irdoc::serialize_ir(back) != xml)
      return failed("generated document " + std::to_string(k));
  }
  return {Outcome::pass, std::to_string(files) + " corpus files re-inline token-exact, 1000 generated documents round-trip"};
}

// ---- 6 ------------------------------------------------------------------------

Outcome validator_suite() {
  std::ifstream manifest(test::test_dir() / "invalid" / "expected.txt");
  std::string line;
  int checked = 0;
  while (std::getline(manifest, line)) {
    if (line.empty() || line[0] == '#')
      continue;
    std::istringstream in(line);
    std::string file, code;
    int ln, col;
    in >> file >> code >> ln >> col;
    fs::path path = test::test_dir() / "invalid" / file;
    auto dir = make_temp_dir("accb-accept");
    auto r = run_process({ACCB_CLI, path.string(), "--src-only", "-o", (dir / "out.c").string()});
    fs::remove_all(dir);
    if (!r)
      return failed("cannot run " + std::string(ACCB_CLI));
    std::string want = path.string() + ":" + std::to_string(ln) + ":" + std::to_string(col) +
                       ": error " + code + ":";
    if (r->status != 1)
      return failed(file + ": exit " + std::to_string(r->status));
    if (r->err.find(want) == std::string::npos)
      return failed(file + ": expected '" + want + "', got " + r->err);
    ++checked;
  }
  if (checked < 5)
    return failed("only " + std::to_string(checked) + " cases in the manifest");
  return {Outcome::pass, "E_NEST, E_CLAUSE, E_REDTYPE, E_SIZE, E_UNSUPPORTED at expected locations, exit 1"};
}

// ---- 7 ------------------------------------------------------------------------

Outcome normalization() {
  std::mt19937 rng(777);
  for (int k = 0; k < 500; ++k) {
    std::string src = test::control_statement_program(rng);
    auto first = cfront::normalize_text(src);
    std::string kept;
    for (std::size_t i = 0; i < first.tokens.size(); ++i)
      if (!first.provenance[i].inserted())
        kept += first.tokens[i].text;
    if (kept != src)
      return failed("case " + std::to_string(k) + ": original tokens not preserved");
    if (cfront::normalize_text(first.text).text != first.text)
      return failed("case " + std::to_string(k) + ": not idempotent");
  }
  return {Outcome::pass, "500 generated cases idempotent and token-subsequence preserving"};
}

// ---- 8 ------------------------------------------------------------------------

Outcome output_naming() {
  struct Case {
    const char *target;
    std::vector<std::string> files;
  };
  std::string listing = test::read_file("golden/matmul_listing.c");
  for (const auto &c : {Case{"cuda", {"x_ipmacc.cu"}},
                        Case{"opencl", {"x_ipmacc.c", "x_ipmacc.cl"}},
                        Case{"serial", {"x_ipmacc.c"}}}) {
    auto dir = make_temp_dir("accb-accept");
    std::ofstream(dir / "x.c") << listing;
    auto r = run_process({ACCB_CLI, (dir / "x.c").string(), "--target", c.target, "--src-only"});
    std::vector<std::string> got;
    for (const auto &e : fs::directory_iterator(dir))
      if (e.path().filename() != "x.c")
        got.push_back(e.path().filename().string());
    fs::remove_all(dir);
    std::sort(got.begin(), got.end());
    if (!r || r->status != 0 || got != c.files) {
      std::string names;
      for (const auto &g : got)
        names += " " + g;
      return failed(std::string(c.target) + " wrote" + names);
    }
  }
  return {Outcome::pass, "x.c -> x_ipmacc.cu | x_ipmacc.c + x_ipmacc.cl | x_ipmacc.c"};
}

// ---- 9 ------------------------------------------------------------------------

Outcome syntax_check() {
  auto clang = find_program("clang");
  auto clangxx = find_program("clang++");
  if (!clang || !clangxx)
    return {Outcome::skip, "clang not installed"};
  std::string shims = (test::test_dir() / "shims").string();
  auto dir = make_temp_dir("accb-syntax");
  int files = 0;
  std::string problem;
  for (const auto &f : corpus()) {
    std::string text = test::read_file(f);
    std::string stem = f.stem().string();
    fs::path cu = dir / (stem + "_ipmacc.cu"), c = dir / (stem + "_ipmacc.c"),
             cl = dir / (stem + "_ipmacc.cl");
    std::ofstream(cu) << translate_to(text, Target::cuda);
    auto t = translate::translate(test::program(text), Target::opencl, cl.filename().string());
    std::ofstream(c) << t.output;
    std::ofstream(cl) << t.sidecar;
    std::vector<std::vector<std::string>> checks = {
        {clangxx->string(), "-x", "cuda", "-nocudainc", "-nocudalib", "--cuda-gpu-arch=sm_50",
         "-fsyntax-only", "-I" + shims, cu.string()},
        {clang->string(), "-x", "c", "-fsyntax-only", "-I" + shims, c.string()},
        {clang->string(), "-x", "cl", "-cl-std=CL2.0", "-fsyntax-only", cl.string()}};
    for (const auto &cmd : checks) {
      auto r = run_process(cmd);
      if (!r || r->status != 0) {
        problem = cmd.back() + ": " + (r ? r->err.substr(0, 400) : "cannot run");
        break;
      }
    }
    if (!problem.empty())
      break;
    ++files;
  }
  fs::remove_all(dir);
  if (!problem.empty())
    return failed(problem);
  return {Outcome::pass, std::to_string(files) +
                             " programs: cuda (clang CUDA mode), opencl host C and .cl kernels pass -fsyntax-only"};
}

} // namespace

int main() {
  struct Criterion {
    int id;
    const char *name;
    Outcome (*run)();
  };
  const Criterion criteria[] = {
      {1, "golden listing translation", golden_listing},
      {2, "serial backend equivalence", serial_equivalence},
      {3, "reduction oracle", reduction_oracle},
      {4, "exactly-once iteration", exactly_once},
      {5, "IR round trip", ir_round_trip},
      {6, "validator suite", validator_suite},
      {7, "normalization properties", normalization},
      {8, "output naming", output_naming},
      {9, "cuda/opencl syntax check", syntax_check},
  };
  int failures = 0;
  for (const auto &c : criteria) {
    Outcome o;
    try {
      o = c.run();
    } catch (const CompileError &e) {
      o = failed(e.diagnostic().code + " " + e.diagnostic().message);
    } catch (const std::exception &e) {
      o = failed(e.what());
    }
    const char *tag = o.kind == Outcome::pass ? "PASS" : o.kind == Outcome::skip ? "SKIP" : "FAIL";
    failures += o.kind == Outcome::fail;
    if (o.detail.size() > 600)
      o.detail = o.detail.substr(0, 600) + " ...";
    std::cout << tag << " " << c.id << " " << c.name << ": " << o.detail << std::endl;
  }
  return failures ? 1 : 0;
}
