#include "treq/tree.hpp"

namespace treq {

std::size_t node_count(const Tree& t) {
  std::size_t n = 1;
  for (const Tree& c : t.children) n += node_count(c);
  return n;
}

}  // namespace treq
