#pragma once

#include <compare>
#include <cstdint>
#include <deque>
#include <optional>
#include <unordered_map>
#include <vector>

#include "treq/dfta.hpp"
#include "treq/emptiness.hpp"
#include "treq/union_find.hpp"

namespace treq {

/// An automaton with every rule removed whose children include an
/// empty-language state, plus the emptiness analysis it was derived from.
/// Trimming never changes any state's language; afterwards a state's
/// language is empty iff it has no rules, which is the precondition the
/// equation solver relies on (body symbol sets then mirror the top symbols
/// of the languages exactly).
struct TrimmedDfta {
  Dfta base;
  std::vector<StateId> empty_states;  // sorted
  NonEmptyResult nonempty;            // witnesses remain valid in base

  bool is_empty_state(StateId q) const { return !nonempty.contains(q); }
};

/// Removes every rule mentioning an empty-language child. One
/// nonempty_states pass plus one rebuild: O(size of the automaton).
TrimmedDfta trim(const Dfta& dfta);

/// Language equation of one class: for each enabled symbol, the child
/// states of the defining rule. At most one tuple per symbol
/// (determinism); entries sorted by symbol.
struct DefiningEquation {
  struct Entry {
    SymbolId symbol;
    std::vector<StateId> children;

    bool operator==(const Entry&) const = default;
  };
  std::vector<Entry> entries;

  bool empty() const { return entries.empty(); }
  const Entry* find(SymbolId f) const;

  bool operator==(const DefiningEquation&) const = default;
};

/// Where a queued equality came from: either it is the goal pair itself,
/// or it was produced while merging (parent_left, parent_right), equating
/// the children at `position` of their `symbol` rules. The chain of these
/// links back to the goal is what witness extraction replays.
struct ChildProvenance {
  StateId parent_left = 0;
  StateId parent_right = 0;
  SymbolId symbol = 0;
  std::uint32_t position = 0;
};

/// nullopt marks the goal equality.
using Provenance = std::optional<ChildProvenance>;

struct PendingEquality {
  StateId left = 0;
  StateId right = 0;
  Provenance provenance;
};

/// Solver progress measure (live classes, classes with a non-empty body,
/// defining + pending equation count). Ordered lexicographically; every
/// merging step strictly decreases it, which bounds the iteration count.
struct IterationMetrics {
  std::size_t live_classes = 0;
  std::size_t nonempty_bodies = 0;
  std::size_t total_equations = 0;

  friend auto operator<=>(const IterationMetrics&,
                          const IterationMetrics&) = default;
};

struct StepResult {
  enum class Kind { Continue, Done, Conflict };
  Kind kind = Kind::Continue;
  bool merged = false;  // true when this step united two classes
  // valid when kind == Conflict: the popped pair and the first symbol (in
  // name order) enabled on exactly one side
  StateId left = 0;
  StateId right = 0;
  SymbolId symbol = 0;
};

/// The variable-elimination state for one equivalence query: a union-find
/// over state variables (substitution), one defining equation per live
/// class, and a FIFO queue of pending equalities with provenance.
///
/// The referenced TrimmedDfta must outlive the system.
class EquationSystem {
 public:
  /// Builds the initial system for deciding L(a) = L(b): one defining
  /// equation per state and the single pending goal equality.
  /// Precondition: neither a nor b is an empty-language state (the caller
  /// dispatches those cases); throws std::logic_error otherwise.
  EquationSystem(const TrimmedDfta& trimmed, StateId a, StateId b);

  /// Runs one iteration:
  ///  - Done when no equality is pending.
  ///  - Pops one equality; if both sides already share a class, no-op.
  ///  - Conflict when the two class bodies enable different symbol sets
  ///    (trimming makes this exactly a language top-symbol mismatch).
  ///  - Otherwise merges the classes (union by size, the larger class
  ///    keeps its body) and queues the child equalities of the popped
  ///    pair's own rules, positionwise per shared symbol.
  StepResult step();

  /// Defining equation of the class currently containing q.
  const DefiningEquation& defining(StateId q);

  /// Current class representative of q.
  StateId representative(StateId q) { return uf_.find(q); }

  IterationMetrics metrics() const { return metrics_; }
  std::size_t pending_count() const { return pending_.size(); }

  StateId goal_left() const { return goal_left_; }
  StateId goal_right() const { return goal_right_; }

  struct ConflictRecord {
    StateId left = 0;
    StateId right = 0;
    SymbolId symbol = 0;
    Provenance provenance;  // of the popped equality that conflicted
  };

  /// Set once step() has returned Conflict.
  const std::optional<ConflictRecord>& conflict() const { return conflict_; }

  /// Provenance of the popped equality whose processing merged (l, r);
  /// defined for every pair recorded in a Child provenance link.
  const Provenance& merge_provenance(StateId l, StateId r) const;

  const TrimmedDfta& trimmed() const { return *trimmed_; }

 private:
  const TrimmedDfta* trimmed_;
  UnionFind uf_;
  std::vector<DefiningEquation> bodies_;  // valid at class roots
  std::deque<PendingEquality> pending_;
  IterationMetrics metrics_;
  StateId goal_left_;
  StateId goal_right_;
  std::optional<ConflictRecord> conflict_;
  std::unordered_map<std::uint64_t, Provenance> merge_log_;
};

/// Outcome of an equivalence query. On NotEquivalent the witness tree is
/// accepted from exactly one of the two queried states, and `conflict`
/// names the state pair and symbol where the languages were told apart
/// (for the empty-versus-nonempty dispatch the symbol is the witness
/// root).
struct Verdict {
  struct ConflictSite {
    StateId left = 0;
    StateId right = 0;
    SymbolId symbol = 0;
  };

  bool equivalent = true;
  std::optional<Tree> witness;
  std::optional<ConflictSite> conflict;
};

/// Rebuilds a distinguishing tree from a conflict: walks the provenance
/// chain back to the goal, placing at the conflict site a tree rooted at
/// the conflict symbol (children filled with emptiness witnesses of the
/// rule's child states on the side that enables the symbol) and at every
/// other position the emptiness witness of the corresponding child state.
/// The result is accepted from exactly one of the goal states.
Tree extract_witness(const EquationSystem& sys,
                     const EquationSystem::ConflictRecord& conflict,
                     const TrimmedDfta& trimmed,
                     const NonEmptyResult& witnesses);

/// Decides L(a) = L(b) by trimming, dispatching empty-language states, and
/// otherwise running the equation system to Done or Conflict. Runs in
/// O(size^2). Throws ValidationError(UnknownState) for out-of-range ids.
Verdict check_equivalence(const Dfta& dfta, StateId a, StateId b);

/// Same, over an existing trim (reuses its emptiness analysis).
Verdict check_equivalence(const TrimmedDfta& trimmed, StateId a, StateId b);

}  // namespace treq
