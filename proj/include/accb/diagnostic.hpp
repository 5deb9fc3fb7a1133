#pragma once

#include <compare>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>

namespace accb {

/// 1-based line and byte column. A default-constructed location is "unknown".
struct SourceLocation {
  int line = 0;
  int column = 0;

  bool valid() const { return line > 0; }
  auto operator<=>(const SourceLocation &) const = default;
};

enum class Severity { error, warning };

struct Diagnostic {
  Severity severity = Severity::error;
  std::string code;
  std::string message;
  SourceLocation location;

  bool operator==(const Diagnostic &) const = default;
};

/// Renders `file:line:col: severity CODE: message`.
std::string format_diagnostic(const Diagnostic &diag, std::string_view file);

bool has_errors(std::span<const Diagnostic> diags);

/// Thrown by pipeline stages that stop at the first error.
class CompileError : public std::runtime_error {
public:
  explicit CompileError(Diagnostic diag);
  const Diagnostic &diagnostic() const { return diag_; }
  const std::string &code() const { return diag_.code; }

private:
  Diagnostic diag_;
};

[[noreturn]] void fail(std::string code, std::string message,
                       SourceLocation loc = {});

} // namespace accb
