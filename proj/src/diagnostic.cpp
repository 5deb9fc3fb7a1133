#include "accb/diagnostic.hpp"

#include <algorithm>

namespace accb {

std::string format_diagnostic(const Diagnostic &diag, std::string_view file) {
  std::string out(file);
  out += ':';
  out += std::to_string(diag.location.line);
  out += ':';
  out += std::to_string(diag.location.column);
  out += diag.severity == Severity::error ? ": error " : ": warning ";
  out += diag.code;
  out += ": ";
  out += diag.message;
  return out;
}

bool has_errors(std::span<const Diagnostic> diags) {
  return std::any_of(diags.begin(), diags.end(), [](const Diagnostic &d) {
    return d.severity == Severity::error;
  });
}

CompileError::CompileError(Diagnostic diag)
    : std::runtime_error(diag.code + ": " + diag.message),
      diag_(std::move(diag)) {}

void fail(std::string code, std::string message, SourceLocation loc) {
  throw CompileError(
      Diagnostic{Severity::error, std::move(code), std::move(message), loc});
}

} // namespace accb
