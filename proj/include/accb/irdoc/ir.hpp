#pragma once

#include "accb/accvalidate/directive.hpp"
#include "accb/cfront/ast.hpp"

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace accb::irdoc {

struct IrTag;

/// Plain C text, including whitespace and inserted braces.
struct CCodeTag {
  std::string text;
  bool operator==(const CCodeTag &) const = default;
};

/// An OpenACC directive and the full statement it governs.
struct PragmaTag {
  accvalidate::DirectiveNode directive;
  std::vector<IrTag> children;
};

/// A `for` statement. `header` is the verbatim `for (...)` text; the body
/// holds everything after the closing parenthesis.
struct ForLoopTag {
  std::string header;
  std::string init, cond, step;
  std::optional<std::string> governor; // text of the governing loop directive
  SourceLocation location;
  std::size_t token = 0; // index of the `for` keyword
  std::vector<IrTag> body;
};

enum class TagKind { ccode, pragma, forloop };

struct IrTag {
  std::variant<CCodeTag, PragmaTag, ForLoopTag> node;

  TagKind kind() const { return static_cast<TagKind>(node.index()); }
  const CCodeTag *ccode() const { return std::get_if<CCodeTag>(&node); }
  const PragmaTag *pragma() const { return std::get_if<PragmaTag>(&node); }
  const ForLoopTag *forloop() const { return std::get_if<ForLoopTag>(&node); }
};

// Directives compare by their serialized identity (text, location, token
// indices); parsed clauses follow from the text.
bool operator==(const PragmaTag &a, const PragmaTag &b);
bool operator==(const ForLoopTag &a, const ForLoopTag &b);
bool operator==(const IrTag &a, const IrTag &b);

struct IrDocument {
  std::vector<IrTag> tags;
  bool operator==(const IrDocument &) const = default;
};

/// Splits the normalized source into the three tag kinds. Throws E_INTERNAL
/// if a directive's statement cannot be located.
IrDocument build_intermediate(const cfront::NormalizedSource &src,
                              std::span<const accvalidate::DirectiveNode> directives);

/// Concatenated text of the tags; for a built document this is the
/// normalized source.
std::string render(std::span<const IrTag> tags);

struct TagCounts {
  std::size_t ccode = 0, pragma = 0, forloop = 0;
};
TagCounts count_tags(const IrDocument &doc);

/// XML text under an `<accir>` root.
std::string serialize_ir(const IrDocument &doc);
/// Inverse of serialize_ir. Throws E_INTERNAL on malformed input.
IrDocument deserialize_ir(std::string_view xml);

// ---- revert ---------------------------------------------------------------

struct Region {
  int id = 0;
  accvalidate::DirectiveKind kind = accvalidate::DirectiveKind::kernels;
  std::string dummy_name;
  /// Enclosing region directives, outermost first, ending with this region's.
  std::vector<accvalidate::DirectiveNode> directives;
  /// Governed statement; nested regions appear as their dummy calls.
  std::vector<IrTag> body;
  /// Function containing the region (filled when an AST is supplied).
  std::string function;
  std::optional<int> parent;
  std::vector<int> nested;

  const accvalidate::DirectiveNode &directive() const { return directives.back(); }
};

class RegionTable {
public:
  std::vector<Region> regions; // indexed by id

  const Region *find(std::string_view dummy_name) const;
  std::size_t size() const { return regions.size(); }
  bool empty() const { return regions.empty(); }
};

struct Reverted {
  std::string host;
  RegionTable table;
};

std::string dummy_name(int id);
std::string dummy_call(int id);

/// Replaces each outermost data/kernels construct with `__accb_region_<id>();`.
/// Ids are assigned in pre-order, so a data region precedes the kernels
/// regions it contains.
Reverted revert(const IrDocument &doc);

/// Fills Region::function from the AST of the normalized source.
void attach_functions(RegionTable &table, const cfront::Ast &ast);

/// Substitutes every dummy call with the original construct. The result of
/// reinline(revert(doc)) equals render(doc.tags).
std::string reinline(std::string_view host, const RegionTable &table);

/// Full original text of one region (directive line + statement).
std::string region_text(const Region &region, const RegionTable &table);

} // namespace accb::irdoc
