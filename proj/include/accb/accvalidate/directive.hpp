#pragma once

#include "accb/cfront/ast.hpp"
#include "accb/diagnostic.hpp"

#include <optional>
#include <string>
#include <vector>

namespace accb::accvalidate {

enum class DirectiveKind { data, kernels, loop };

enum class ClauseKind {
  copy,
  copyin,
  copyout,
  create,
  present,
  independent,
  private_,
  reduction,
  gang,
  worker,
  vector,
};

/// Every operator OpenACC accepts in a reduction clause. Only add, mul, max
/// and min can be lowered; the rest are rejected with E_REDOP.
enum class ReductionOp { add, mul, max, min, bit_and, bit_or, bit_xor, land, lor };

std::string_view to_string(DirectiveKind k);
std::string_view to_string(ClauseKind k);
std::string_view to_string(ReductionOp op);

bool is_data_clause(ClauseKind k);

/// `[start:count]` on a data-clause variable.
struct SubarrayBounds {
  std::string start;
  std::string count;
  bool operator==(const SubarrayBounds &) const = default;
};

struct ClauseVar {
  std::string name;
  std::optional<SubarrayBounds> bounds;
  SourceLocation location;
  bool operator==(const ClauseVar &) const = default;
};

struct Clause {
  ClauseKind kind = ClauseKind::independent;
  std::vector<ClauseVar> vars;
  std::optional<ReductionOp> op;   // reduction only
  std::optional<std::string> size; // gang/worker/vector argument
  SourceLocation location;
  bool operator==(const Clause &) const = default;
};

struct DirectiveNode {
  DirectiveKind kind = DirectiveKind::kernels;
  std::vector<Clause> clauses;
  SourceLocation location;
  /// Verbatim pragma line.
  std::string text;
  /// Index of the pragma token in the normalized stream.
  std::size_t token = 0;
  /// The statement the directive governs (empty if none follows).
  cfront::TokenSpan attached;
  /// First token of the governed statement ("for", "{", ...).
  std::string attached_keyword;
  /// Innermost enclosing directive (index into the scanned list).
  std::optional<std::size_t> parent;

  bool has(ClauseKind k) const;
  std::vector<const Clause *> all(ClauseKind k) const;
};

/// Parses one `#pragma acc` line. On failure returns nullopt and fills `error`.
std::optional<DirectiveNode> parse_directive(std::string_view pragma_text,
                                             SourceLocation location,
                                             Diagnostic *error);

struct ScanResult {
  std::vector<DirectiveNode> directives;
  std::vector<Diagnostic> diagnostics;
};

/// Converts every `#pragma acc` line to a DirectiveNode or exactly one error
/// diagnostic. Non-acc pragmas are left alone.
ScanResult scan_directives(const cfront::NormalizedSource &src);

/// Checks clause legality, attachment, nesting and clause variables.
/// Returns diagnostics ordered by location; empty means the program is valid.
std::vector<Diagnostic> validate(std::span<const DirectiveNode> directives,
                                 const cfront::Ast &ast);

} // namespace accb::accvalidate
