#pragma once

#include "accb/accvalidate/directive.hpp"
#include "accb/cfront/ast.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace accb::test {

inline std::filesystem::path test_dir() { return ACCB_TEST_DIR; }

/// Reads a file relative to the tests/ directory.
inline std::string read_file(const std::filesystem::path &rel) {
  std::ifstream in(rel.is_absolute() ? rel : test_dir() / rel, std::ios::binary);
  if (!in)
    throw std::runtime_error("cannot open " + rel.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Frontend products of one source text.
struct Front {
  cfront::NormalizedSource src;
  cfront::Ast ast;
  std::vector<accvalidate::DirectiveNode> directives;
  std::vector<Diagnostic> diagnostics;
};

inline Front front(std::string_view text) {
  Front f;
  f.src = cfront::normalize_text(text);
  f.ast = cfront::parse_ast(f.src);
  auto scan = accvalidate::scan_directives(f.src);
  f.directives = std::move(scan.directives);
  f.diagnostics = std::move(scan.diagnostics);
  auto more = accvalidate::validate(f.directives, f.ast);
  f.diagnostics.insert(f.diagnostics.end(), more.begin(), more.end());
  return f;
}

} // namespace accb::test
