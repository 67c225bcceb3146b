#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace treq {

/// Ground term: a symbol name plus exactly arity-many children. Trees are
/// self-contained (they carry names, not interned ids) so they can be
/// printed and compared without an alphabet at hand; well-formedness over
/// a particular alphabet is checked where a tree meets an automaton.
struct Tree {
  std::string symbol;
  std::vector<Tree> children;

  bool operator==(const Tree&) const = default;
};

inline Tree leaf(std::string name) { return Tree{std::move(name), {}}; }

inline Tree node(std::string name, std::vector<Tree> children) {
  return Tree{std::move(name), std::move(children)};
}

std::size_t node_count(const Tree& t);

}  // namespace treq
