#pragma once

#include "accb/cfront/token.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace accb::cfront {

/// Where a normalized token came from. Inserted braces have no origin.
struct Provenance {
  std::optional<SourceLocation> original;

  bool inserted() const { return !original.has_value(); }
  bool operator==(const Provenance &) const = default;
};

/// Source with every if/else/while/for/do body enclosed in braces.
/// `tokens[i]` carries its location in `text`; `provenance[i]` maps it back.
struct NormalizedSource {
  std::string text;
  std::vector<Token> tokens;
  std::vector<Provenance> provenance;

  /// Original location of token `i`; inserted tokens report the nearest
  /// preceding original token.
  SourceLocation original_location(std::size_t i) const;
  /// Maps a location in `text` back to the original source.
  SourceLocation original_location(SourceLocation normalized) const;
};

/// Brace-encloses control bodies. Only `{`/`}` punctuators (and a single
/// separating space each) are inserted; nothing is deleted or reordered.
/// `else if` chains are kept as chains. Throws E_PARSE on unbalanced
/// nesting or malformed control headers.
NormalizedSource normalize(std::span<const Token> tokens);

/// Convenience: tokenize + normalize.
NormalizedSource normalize_text(std::string_view source);

// Statement-extent helpers shared by the parser, directive scanner and IR
// builder. All indices refer to `toks`.

/// First non-trivia index at or after `i`, or `toks.size()`.
std::size_t next_significant(std::span<const Token> toks, std::size_t i);

/// Index of the bracket closing the one at `open` (`(`, `[` or `{`).
std::size_t matching_close(std::span<const Token> toks, std::size_t open);

/// One past the last significant token of the statement starting at the
/// first significant token at or after `begin`. A `#pragma` line extends over
/// the statement it precedes.
std::size_t statement_end(std::span<const Token> toks, std::size_t begin);

} // namespace accb::cfront
