#include "treq/alphabet.hpp"

#include <algorithm>

namespace treq {

bool is_identifier(std::string_view s) {
  if (s.empty()) return false;
  auto head = [](char c) {
    return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_';
  };
  auto tail = [&](char c) { return head(c) || (c >= '0' && c <= '9'); };
  if (!head(s[0])) return false;
  return std::all_of(s.begin() + 1, s.end(), tail);
}

Alphabet::Alphabet(std::vector<RankedSymbol> symbols)
    : symbols_(std::move(symbols)) {
  for (const RankedSymbol& s : symbols_) {
    if (!is_identifier(s.name)) {
      throw ValidationError(ErrorCode::InvalidIdentifier,
                            "invalid symbol name: '" + s.name + "'");
    }
    if (s.arity < 0) {
      throw ValidationError(ErrorCode::ArityMismatch,
                            "negative arity for symbol: " + s.name);
    }
  }
  std::sort(symbols_.begin(), symbols_.end(),
            [](const RankedSymbol& a, const RankedSymbol& b) {
              return a.name < b.name;
            });
  for (std::size_t i = 1; i < symbols_.size(); ++i) {
    if (symbols_[i - 1].name == symbols_[i].name) {
      throw ValidationError(ErrorCode::DuplicateSymbol,
                            "duplicate symbol: " + symbols_[i].name);
    }
  }
}

std::optional<SymbolId> Alphabet::find(std::string_view name) const {
  auto it = std::lower_bound(
      symbols_.begin(), symbols_.end(), name,
      [](const RankedSymbol& s, std::string_view n) { return s.name < n; });
  if (it == symbols_.end() || it->name != name) return std::nullopt;
  return static_cast<SymbolId>(it - symbols_.begin());
}

}  // namespace treq
