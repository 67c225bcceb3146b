#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "treq/dfta.hpp"
#include "treq/equivalence.hpp"

namespace treq {

/// Flat enumeration of every ground tree with at most `max_nodes` nodes:
/// one row per tree, children referring to earlier rows. Rows are grouped
/// by node count in nondecreasing order; within one node count they are
/// sorted lexicographically by rendered form unless the table was built
/// with lexicographic = false (the set of rows is the same either way).
class TreeTable {
 public:
  struct Row {
    SymbolId symbol;
    std::uint32_t children_begin;  // into child_pool
    std::uint32_t nodes;
  };

  std::size_t size() const { return rows_.size(); }
  const Row& row(std::uint32_t i) const { return rows_[i]; }
  std::span<const std::uint32_t> children(std::uint32_t i) const;

  /// Index of the first row with the given node count (node_count from 1
  /// to max_nodes + 1; the last entry is the total row count).
  std::span<const std::uint32_t> bucket_offsets() const { return bucket_begin_; }

  /// Expands row `i` back into a Tree.
  Tree materialize(std::uint32_t i) const;

  const Alphabet& alphabet() const { return alphabet_; }

 private:
  friend TreeTable enumerate_tree_table(const Alphabet&, std::size_t, bool);

  Alphabet alphabet_;
  std::vector<Row> rows_;
  std::vector<std::uint32_t> child_pool_;
  std::vector<std::uint32_t> bucket_begin_;
};

TreeTable enumerate_tree_table(const Alphabet& alphabet, std::size_t max_nodes,
                               bool lexicographic = true);

/// Exactly the well-formed ground trees with at most max_nodes nodes, in
/// nondecreasing node-count order, lexicographic by rendered form within
/// one node count.
std::vector<Tree> enumerate_trees(const Alphabet& alphabet,
                                  std::size_t max_nodes);

/// Per-tree acceptance bitmask over all states (bit q set iff the tree at
/// that row is accepted from state q). Supports up to 64 states.
std::vector<std::uint64_t> acceptance_masks(const Dfta& dfta,
                                            const TreeTable& table);

/// Brute-force refutation: returns the first enumerated tree (at most
/// max_nodes nodes) accepted from exactly one of a and b, or nullopt if no
/// such tree exists within the bound. Sound for refuting equivalence;
/// inconclusive for confirming it.
std::optional<Tree> bounded_equiv(const Dfta& dfta, StateId a, StateId b,
                                  std::size_t max_nodes);

/// Exact independent decision procedure used to cross-check the equation
/// solver: breadth-first search over reachable state pairs. A pair
/// conflicts iff the two states enable different symbol sets in the
/// trimmed automaton; otherwise its successors are the positionwise child
/// pairs per shared symbol. Empty-language states are dispatched first,
/// exactly as in check_equivalence. On non-equivalence the witness is
/// rebuilt from the BFS parent chain.
Verdict pair_bfs_equiv(const TrimmedDfta& trimmed, StateId a, StateId b);

/// Parameters for seeded random automaton generation. Output is a pure
/// function of the config; identical configs give identical automata.
struct GenConfig {
  std::uint32_t state_count = 1;
  std::vector<int> symbol_arities = {0};  // one symbol per entry, arity <= 4
  std::uint32_t rules_min = 0;            // rules per state, inclusive range
  std::uint32_t rules_max = 0;            // (clamped to the symbol count)
  std::uint64_t seed = 0;
};

/// Generates a valid random DFTA: per state, a without-replacement sample
/// of left-hand-side symbols (so determinism holds by construction) with
/// uniformly drawn child states. Throws std::invalid_argument on a bad
/// config.
Dfta random_dfta(const GenConfig& cfg);

struct EquivPair {
  Dfta dfta;
  StateId left;
  StateId right;
};

/// Builds a random automaton, picks a state x, and adds a fresh clone of x
/// duplicating x's rules with children unchanged, so the two have equal
/// languages by construction.
EquivPair random_equiv_pair(const GenConfig& cfg);

/// Deterministic worst-case family for scaling checks: two parallel chains
/// of binary-symbol rules of the given length ending in the same constant,
/// so equivalence of the two chain heads forces one merge per level.
/// States are u0..un / v0..vn over alphabet {f/2, a/0}; every state is
/// non-empty. Automaton size is 10 * chain_length + 6.
Dfta parallel_chain_dfta(std::size_t chain_length);

/// Heads (u0, v0) of the two chains of `d = parallel_chain_dfta(...)`.
std::pair<StateId, StateId> parallel_chain_heads(const Dfta& d);

}  // namespace treq
