#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "treq/alphabet.hpp"
#include "treq/tree.hpp"

namespace treq {

using StateId = std::uint32_t;

/// One transition: (source, symbol) -> symbol(children...). For a nullary
/// symbol the rule is terminating and `children` is empty.
struct Rule {
  StateId source = 0;
  SymbolId symbol = 0;
  std::vector<StateId> children;

  bool operator==(const Rule&) const = default;
};

/// A rule as named in input, before states and symbols are interned.
struct RuleSpec {
  std::string source;
  std::string symbol;
  std::vector<std::string> children;
};

/// Top-down deterministic finite tree automaton.
///
/// Immutable once constructed. States are interned to dense ids in
/// lexicographic name order (mirroring Alphabet), rules are stored sorted
/// by (source, symbol), and the (state, symbol) -> rule map is a dense
/// array, so lookups are O(1) and all canonical orderings fall out of the
/// id order. At most one rule may exist per (source, symbol) pair.
class Dfta {
 public:
  /// Validating constructor from named parts. Throws ValidationError:
  /// DuplicateState, InvalidIdentifier, UnknownState, UnknownSymbol,
  /// ArityMismatch, DuplicateLhs, InitialNotAState.
  Dfta(Alphabet alphabet, std::vector<std::string> states,
       const std::string& initial, const std::vector<RuleSpec>& rules);

  /// Constructor from already-interned rules. `states` must be sorted and
  /// duplicate-free and ids in `rules` must refer to it; the same
  /// validation errors apply.
  Dfta(Alphabet alphabet, std::vector<std::string> states, StateId initial,
       std::vector<Rule> rules);

  const Alphabet& alphabet() const { return alphabet_; }

  std::size_t state_count() const { return state_names_.size(); }
  const std::string& state_name(StateId q) const { return state_names_[q]; }
  std::span<const std::string> state_names() const { return state_names_; }
  std::optional<StateId> find_state(std::string_view name) const;

  StateId initial() const { return initial_; }

  /// All rules, sorted by (source, symbol).
  std::span<const Rule> rules() const { return rules_; }

  /// Rules of one state, sorted by symbol.
  std::span<const Rule> rules_of(StateId q) const;

  /// The unique rule for (q, f), or nullptr if none exists.
  const Rule* find_rule(StateId q, SymbolId f) const;

  /// Size measure: total letters across rules plus the state count,
  /// i.e. sum over rules of (2 + arity) plus |states|.
  std::size_t size() const;

  /// True iff `t` is accepted starting from state `q`: the run rewrites
  /// q(t) to t. Throws ValidationError if `q` is out of range or `t` uses
  /// a symbol absent from the alphabet (UnknownSymbol) or with the wrong
  /// child count (ArityMismatch).
  bool accepts(StateId q, const Tree& t) const;

  bool operator==(const Dfta&) const = default;

 private:
  void index_rules();
  bool accepts_impl(StateId q, const Tree& t) const;

  Alphabet alphabet_;
  std::vector<std::string> state_names_;  // sorted
  StateId initial_ = 0;
  std::vector<Rule> rules_;               // sorted by (source, symbol)
  std::vector<std::int32_t> rule_index_;  // state * |F| + symbol -> rule or -1
  std::vector<std::uint32_t> rules_begin_;
};

}  // namespace treq
