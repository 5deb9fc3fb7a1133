#pragma once

#include "accb/cfront/normalize.hpp"

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace accb::cfront {

/// Half-open range of token indices into NormalizedSource::tokens.
struct TokenSpan {
  std::size_t begin = 0;
  std::size_t end = 0;

  bool empty() const { return begin >= end; }
  bool contains(std::size_t i) const { return i >= begin && i < end; }
  bool contains(TokenSpan o) const { return o.begin >= begin && o.end <= end; }
  bool operator==(const TokenSpan &) const = default;
};

struct TypeSpec {
  /// Canonical specifier text without storage classes, e.g. "unsigned int",
  /// "const float", "struct point", "point".
  std::string text;
  /// Typedef names and `struct X` / `union X` / `enum X` tags mentioned.
  std::vector<std::string> referenced_types;
  bool is_typedef = false;
  bool is_static = false;
  bool is_extern = false;
  /// Set when the specifier itself defines a struct/union/enum body.
  std::optional<std::string> defined_tag; // "struct point", or "" if anonymous
  TokenSpan tag_body;
  std::vector<std::string> enumerators;
  TokenSpan span;
};

struct Extent {
  TokenSpan expr;
  std::string text;
  std::optional<long long> value; // set when the extent is an integer constant
};

struct Parameter;

struct Declarator {
  std::string name;
  std::size_t name_token = 0;
  int pointer_depth = 0;
  std::vector<Extent> extents;
  bool is_function = false;
  std::vector<Parameter> params;
  TokenSpan init;
  TokenSpan span;

  bool is_array() const { return !extents.empty(); }
  /// Every extent is an integer constant.
  bool fixed_size() const;
};

struct Parameter {
  TypeSpec type;
  Declarator declarator;
};

struct Declaration {
  TypeSpec type;
  std::vector<Declarator> declarators;
  TokenSpan span;
};

enum class StmtKind {
  compound,
  declaration,
  expression,
  if_,
  for_,
  while_,
  do_,
  switch_,
  case_label,
  return_,
  break_,
  continue_,
  empty,
  pragma,       // `#pragma` line; children[0] is the governed statement if any
  preprocessor, // other `#` line inside a function
};

struct Stmt {
  StmtKind kind = StmtKind::empty;
  TokenSpan span;
  std::size_t first_token = 0; // keyword / first significant token
  std::vector<Stmt> children;
  std::optional<Declaration> decl; // declaration statement or for-init decl
  TokenSpan init, cond, step;      // for: the three header parts; if/while/switch: cond
  TokenSpan expr;                  // expression / return value
};

struct FunctionDef {
  std::string name;
  TypeSpec return_type;
  Declarator declarator;
  Stmt body;
  TokenSpan span;
};

struct Macro {
  std::string name;
  bool function_like = false;
  std::string replacement;
  std::size_t token = 0;
};

enum class ItemKind { function, declaration, preprocessor, pragma };

struct TopItem {
  ItemKind kind;
  std::size_t index; // into functions / declarations / directive tokens
  TokenSpan span;
};

/// Where a name visible at some point was declared.
enum class DeclOrigin { global, parameter, local };

struct VisibleDecl {
  DeclOrigin origin = DeclOrigin::global;
  const TypeSpec *type = nullptr;
  const Declarator *declarator = nullptr;
  TokenSpan span; // the whole declaration
};

/// Abstract syntax tree of one normalized translation unit.
class Ast {
public:
  std::vector<FunctionDef> functions;
  std::vector<Declaration> declarations; // global scope, in order
  std::vector<Macro> macros;
  std::vector<TopItem> items;

  const FunctionDef *find_function(std::string_view name) const;
  /// Function whose definition span contains token `i`.
  const FunctionDef *function_at(std::size_t i) const;

  /// Innermost declaration of `name` visible at token `pos`.
  std::optional<VisibleDecl> lookup(std::string_view name, std::size_t pos) const;

  /// Global typedef / tag definitions. Keys are "point" or "struct point".
  std::optional<TokenSpan> type_definition(std::string_view name) const;
  const Declaration *type_declaration(std::string_view name) const;
  /// Enumerator names map to the declaration of their enum.
  const Declaration *enumerator(std::string_view name) const;
  const Macro *macro(std::string_view name) const;

  /// Statement whose span starts at `first_token` (searching all functions).
  const Stmt *statement_at(std::size_t first_token) const;

  std::map<std::string, long long, std::less<>> constant_table() const;

  /// True for integer, floating and enum types, following typedefs.
  bool is_arithmetic(std::string_view type_text) const;
};

/// Parses the supported C subset. Throws E_PARSE for constructs outside the
/// subset (goto, labels, variadic functions, function pointers) and E_DUP on
/// duplicate top-level definitions.
Ast parse_ast(const NormalizedSource &src);

/// Evaluates an integer constant expression over `toks[span]`, resolving
/// identifiers through `constants`. Returns nullopt if not constant.
std::optional<long long>
evaluate_constant(std::span<const Token> toks, TokenSpan span,
                  const std::map<std::string, long long, std::less<>> &constants);
std::optional<long long>
evaluate_constant(std::string_view text,
                  const std::map<std::string, long long, std::less<>> &constants);

/// Text of `toks[span]` with trivia collapsed to single spaces and trimmed.
std::string span_text(std::span<const Token> toks, TokenSpan span);
/// Verbatim text of `toks[span]`.
std::string raw_text(std::span<const Token> toks, TokenSpan span);

} // namespace accb::cfront
