#pragma once

#include <string>
#include <string_view>

#include "treq/dfta.hpp"

namespace treq {

/// Parses the DFTA text format:
///
///   alphabet: f/2 g/1 a/0 b/0
///   states: p q r s
///   initial: p
///   rules:
///     p f -> r r
///     p a ->
///
/// Sections appear in this order. `#` starts a comment to end of line.
/// Each rule occupies one line; the child count must equal the symbol's
/// declared arity. Input must be ASCII. Throws ParseError with the span
/// of the offending token.
Dfta parse_dfta(std::string_view text);

/// Canonical form: sections in fixed order; symbols, states and rules each
/// sorted lexicographically. parse_dfta(render_dfta(d)) == d, and the
/// output is a function of the abstract automaton only.
std::string render_dfta(const Dfta& dfta);

/// Parses a term such as `f(g(a),b)`. Nullary symbols accept both `a` and
/// `a()`. Whitespace between tokens is allowed. Throws ParseError
/// (Syntax, UnknownSymbol, ArityMismatch).
Tree parse_tree(std::string_view text, const Alphabet& alphabet);

/// Canonical form: `name` for leaves, `name(c1,...,ck)` otherwise, with no
/// whitespace. Round-trips with parse_tree.
std::string render_tree(const Tree& tree);

}  // namespace treq
