#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "treq/errors.hpp"

namespace treq {

using SymbolId = std::uint32_t;

/// A function symbol with a fixed number of children. Nullary symbols
/// (arity 0) label leaves.
struct RankedSymbol {
  std::string name;
  int arity = 0;

  bool operator==(const RankedSymbol&) const = default;
};

/// Returns true if `s` matches [A-Za-z_][A-Za-z0-9_]*.
bool is_identifier(std::string_view s);

/// Immutable finite set of ranked symbols with unique names.
///
/// Symbols are interned in lexicographic name order, so ascending SymbolId
/// coincides with name order everywhere; canonical output and tie-breaking
/// rules rely on this.
class Alphabet {
 public:
  Alphabet() = default;

  /// Throws ValidationError on an empty or malformed name, a negative
  /// arity, or two symbols sharing a name.
  explicit Alphabet(std::vector<RankedSymbol> symbols);

  std::size_t size() const { return symbols_.size(); }
  const RankedSymbol& symbol(SymbolId id) const { return symbols_[id]; }
  const std::string& name(SymbolId id) const { return symbols_[id].name; }
  int arity(SymbolId id) const { return symbols_[id].arity; }

  std::optional<SymbolId> find(std::string_view name) const;

  std::span<const RankedSymbol> symbols() const { return symbols_; }

  bool operator==(const Alphabet&) const = default;

 private:
  std::vector<RankedSymbol> symbols_;  // sorted by name
};

}  // namespace treq
