#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "treq/dfta.hpp"

namespace treq {

/// Counters recorded by one nonempty_states pass, for verifying the linear
/// bound: every state enters the worklist at most once and every rule's
/// readiness countdown is touched at most arity times.
struct EmptinessStats {
  std::vector<std::uint32_t> state_pushes;  // indexed by state
  std::vector<std::uint32_t> rule_checks;   // indexed by rule position
};

/// Which states accept at least one tree, in discovery order, plus enough
/// of each state's first firing rule to rebuild a witness tree on demand.
class NonEmptyResult {
 public:
  bool contains(StateId q) const { return firing_symbol_[q] >= 0; }
  std::size_t count() const { return order_.size(); }

  /// States in the order they were discovered non-empty.
  std::span<const StateId> order() const { return order_; }

  /// Assembles a tree accepted from `q` out of the recorded firing rules.
  /// Defined exactly on the non-empty states; throws std::logic_error
  /// otherwise. Children were always discovered before their parent, so
  /// assembly terminates, but the tree can be large for deeply nested
  /// automata - it is built lazily for exactly that reason.
  Tree witness(StateId q) const;

 private:
  friend NonEmptyResult nonempty_states(const Dfta& dfta,
                                        EmptinessStats* stats);

  Alphabet alphabet_;
  std::vector<std::int32_t> firing_symbol_;  // -1 for empty states
  std::vector<std::vector<StateId>> firing_children_;
  std::vector<StateId> order_;
};

/// Computes { q : L(q) != empty } for every state in one worklist pass over
/// the rules. Each rule keeps a countdown of child occurrences not yet
/// known non-empty, so the pass runs in O(size of the automaton). A state's
/// witness comes from the first rule that fired for it; the worklist is
/// FIFO and rules are scanned in (source, symbol) order, which keeps
/// witnesses shallow and the result deterministic.
NonEmptyResult nonempty_states(const Dfta& dfta,
                               EmptinessStats* stats = nullptr);

/// True iff L(q) is empty. Runs a full nonempty_states pass; callers that
/// need several states should call nonempty_states once instead.
bool is_empty(const Dfta& dfta, StateId q);

}  // namespace treq
