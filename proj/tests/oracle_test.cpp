#include <doctest.h>

#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "support/test_support.hpp"
#include "treq/equivalence.hpp"
#include "treq/errors.hpp"
#include "treq/oracle.hpp"
#include "treq/text_format.hpp"

using namespace treq;

namespace {

Dfta ex1() { return parse_dfta(test::kEx1); }

std::vector<std::string> rendered(const std::vector<Tree>& trees) {
  std::vector<std::string> out;
  out.reserve(trees.size());
  for (const Tree& t : trees) out.push_back(render_tree(t));
  return out;
}

// Number of trees with exactly n nodes, by the combinatorial recurrence:
// sum over root symbols of the compositions of n - 1 among the children.
std::map<std::size_t, std::size_t> tree_counts(const Alphabet& alphabet,
                                               std::size_t max_nodes) {
  std::map<std::size_t, std::size_t> counts;
  for (std::size_t n = 1; n <= max_nodes; ++n) {
    std::size_t total = 0;
    for (SymbolId f = 0; f < alphabet.size(); ++f) {
      std::size_t arity = static_cast<std::size_t>(alphabet.arity(f));
      if (arity == 0) {
        total += n == 1 ? 1 : 0;
        continue;
      }
      // ways(k, m): trees for k remaining children over m remaining nodes
      std::vector<std::vector<std::size_t>> memo(
          arity + 1, std::vector<std::size_t>(n, 0));
      for (std::size_t m = 0; m < n; ++m) memo[0][m] = m == 0 ? 1 : 0;
      for (std::size_t k = 1; k <= arity; ++k) {
        for (std::size_t m = 0; m < n; ++m) {
          for (std::size_t first = 1; first <= m; ++first) {
            memo[k][m] += counts.count(first) ? counts[first] *
                                                    memo[k - 1][m - first]
                                              : 0;
          }
        }
      }
      total += n >= 1 ? memo[arity][n - 1] : 0;
    }
    counts[n] = total;
  }
  return counts;
}

}  // namespace

TEST_CASE("enumerate_trees on the ex1 alphabet") {
  Alphabet alpha = ex1().alphabet();

  CHECK(rendered(enumerate_trees(alpha, 1)) ==
        std::vector<std::string>{"a", "b"});
  CHECK(rendered(enumerate_trees(alpha, 2)) ==
        std::vector<std::string>{"a", "b", "g(a)", "g(b)"});

  SUBCASE("an alphabet with only a constant") {
    Alphabet tiny{{{"a", 0}}};
    CHECK(rendered(enumerate_trees(tiny, 5)) == std::vector<std::string>{"a"});
  }
  SUBCASE("max_nodes must be positive") {
    CHECK_THROWS_AS(enumerate_trees(alpha, 0), std::invalid_argument);
  }
}

TEST_CASE("enumeration is ordered, duplicate-free and complete") {
  Alphabet alpha = ex1().alphabet();
  auto trees = enumerate_trees(alpha, 7);

  std::map<std::size_t, std::size_t> seen;
  std::set<std::string> unique;
  std::size_t last_nodes = 0;
  std::string last_text;
  for (const Tree& t : trees) {
    std::size_t n = node_count(t);
    CHECK(n >= last_nodes);
    if (n == last_nodes) {
      CHECK(last_text < render_tree(t));  // lexicographic within a size
    }
    last_nodes = n;
    last_text = render_tree(t);
    ++seen[n];
    CHECK(unique.insert(last_text).second);
  }

  auto expected = tree_counts(alpha, 7);
  for (auto [n, count] : expected) {
    CHECK(seen[n] == count);
  }
}

TEST_CASE("bounded_equiv on ex1") {
  Dfta d = ex1();
  StateId p = *d.find_state("p");
  StateId q = *d.find_state("q");
  StateId s = *d.find_state("s");

  auto dist = bounded_equiv(d, p, s, 1);
  REQUIRE(dist.has_value());
  CHECK(render_tree(*dist) == "a");

  CHECK_FALSE(bounded_equiv(d, p, q, 9).has_value());
  CHECK_FALSE(bounded_equiv(d, s, s, 9).has_value());
  CHECK_THROWS_AS(bounded_equiv(d, p, 99, 3), ValidationError);
}

TEST_CASE("pair_bfs_equiv on ex1") {
  Dfta d = ex1();
  TrimmedDfta t = trim(d);
  auto state = [&](const char* n) { return *d.find_state(n); };

  CHECK(pair_bfs_equiv(t, state("p"), state("q")).equivalent);
  CHECK(pair_bfs_equiv(t, state("r"), state("r")).equivalent);
  CHECK(pair_bfs_equiv(t, state("u"), state("dead")).equivalent);

  Verdict v = pair_bfs_equiv(t, state("p"), state("s"));
  REQUIRE_FALSE(v.equivalent);
  CHECK(render_tree(*v.witness) == "a");
  CHECK(d.accepts(state("p"), *v.witness) !=
        d.accepts(state("s"), *v.witness));

  Verdict w = pair_bfs_equiv(t, state("p"), state("dead"));
  REQUIRE_FALSE(w.equivalent);
  CHECK(d.accepts(state("p"), *w.witness));
}

TEST_CASE("pair_bfs_equiv agrees with check_equivalence on random automata") {
  std::mt19937_64 rng(271828);
  for (int i = 0; i < 120; ++i) {
    GenConfig cfg;
    cfg.state_count = 2 + static_cast<std::uint32_t>(rng() % 9);
    cfg.symbol_arities = {0, 0, 1, 2};
    cfg.rules_min = 0;
    cfg.rules_max = 3;
    cfg.seed = rng();
    Dfta d = random_dfta(cfg);
    TrimmedDfta t = trim(d);
    for (StateId a = 0; a < d.state_count(); ++a) {
      for (StateId b = 0; b < d.state_count(); ++b) {
        Verdict solver = check_equivalence(t, a, b);
        Verdict oracle = pair_bfs_equiv(t, a, b);
        CAPTURE(i);
        CHECK(solver.equivalent == oracle.equivalent);
        if (!oracle.equivalent) {
          CHECK(d.accepts(a, *oracle.witness) != d.accepts(b, *oracle.witness));
        }
      }
    }
  }
}

TEST_CASE("bounded_equiv never contradicts the exact deciders") {
  std::mt19937_64 rng(161803);
  for (int i = 0; i < 25; ++i) {
    GenConfig cfg;
    cfg.state_count = 2 + static_cast<std::uint32_t>(rng() % 7);
    cfg.symbol_arities = {0, 0, 1, 2};
    cfg.rules_min = 0;
    cfg.rules_max = 3;
    cfg.seed = rng();
    Dfta d = random_dfta(cfg);
    TrimmedDfta t = trim(d);
    for (StateId a = 0; a < d.state_count(); ++a) {
      for (StateId b = a + 1; b < d.state_count(); ++b) {
        bool equivalent = check_equivalence(t, a, b).equivalent;
        auto dist = bounded_equiv(d, a, b, 7);
        if (equivalent) {
          CHECK_FALSE(dist.has_value());
        } else if (dist.has_value()) {
          CHECK(d.accepts(a, *dist) != d.accepts(b, *dist));
        }
      }
    }
  }
}

TEST_CASE("random_dfta is deterministic per seed and always valid") {
  GenConfig cfg;
  cfg.state_count = 9;
  cfg.symbol_arities = {0, 1, 2, 3};
  cfg.rules_min = 1;
  cfg.rules_max = 3;
  cfg.seed = 1;

  Dfta first = random_dfta(cfg);
  Dfta second = random_dfta(cfg);
  CHECK(first == second);
  CHECK(render_dfta(first) == render_dfta(second));

  SUBCASE("different seeds differ") {
    cfg.seed = 2;
    CHECK_FALSE(random_dfta(cfg) == first);
  }
  SUBCASE("zero rules per state leaves every language empty") {
    cfg.rules_min = cfg.rules_max = 0;
    Dfta d = random_dfta(cfg);
    CHECK(d.rules().empty());
    CHECK(nonempty_states(d).count() == 0);
  }
  SUBCASE("validation never fires across seeds") {
    std::mt19937_64 rng(99);
    for (int i = 0; i < 200; ++i) {
      cfg.seed = rng();
      cfg.state_count = 1 + static_cast<std::uint32_t>(rng() % 12);
      CHECK_NOTHROW(random_dfta(cfg));
    }
  }
  SUBCASE("bad configs are rejected") {
    GenConfig bad;
    bad.state_count = 0;
    CHECK_THROWS_AS(random_dfta(bad), std::invalid_argument);
    bad = GenConfig{};
    bad.symbol_arities = {5};
    CHECK_THROWS_AS(random_dfta(bad), std::invalid_argument);
    bad = GenConfig{};
    bad.rules_min = 3;
    bad.rules_max = 1;
    CHECK_THROWS_AS(random_dfta(bad), std::invalid_argument);
  }
}

TEST_CASE("random_equiv_pair clones have equal languages") {
  std::mt19937_64 rng(1729);
  for (int i = 0; i < 100; ++i) {
    GenConfig cfg;
    cfg.state_count = 2 + static_cast<std::uint32_t>(rng() % 8);
    cfg.symbol_arities = {0, 0, 1, 2};
    cfg.rules_min = 0;  // rules_min 0 also exercises empty-state clones
    cfg.rules_max = 3;
    cfg.seed = rng();
    EquivPair pair = random_equiv_pair(cfg);
    CHECK(check_equivalence(pair.dfta, pair.left, pair.right).equivalent);
  }
}

TEST_CASE("deleting a clone rule breaks equivalence when a distinguisher exists") {
  std::mt19937_64 rng(4104);
  int perturbed = 0;
  for (int i = 0; i < 120 && perturbed < 60; ++i) {
    GenConfig cfg;
    cfg.state_count = 2 + static_cast<std::uint32_t>(rng() % 8);
    cfg.symbol_arities = {0, 0, 1, 2};
    cfg.rules_min = 1;
    cfg.rules_max = 3;
    cfg.seed = rng();
    EquivPair pair = random_equiv_pair(cfg);
    auto clone_rules = pair.dfta.rules_of(pair.right);
    if (clone_rules.empty()) continue;
    ++perturbed;
    std::size_t drop = rng() % clone_rules.size();

    std::vector<RuleSpec> specs;
    for (const Rule& r : pair.dfta.rules()) {
      if (r.source == pair.right && r.symbol == clone_rules[drop].symbol) {
        continue;
      }
      RuleSpec spec;
      spec.source = pair.dfta.state_name(r.source);
      spec.symbol = pair.dfta.alphabet().name(r.symbol);
      for (StateId c : r.children) {
        spec.children.push_back(pair.dfta.state_name(c));
      }
      specs.push_back(std::move(spec));
    }
    std::vector<std::string> names(pair.dfta.state_names().begin(),
                                   pair.dfta.state_names().end());
    Dfta mutated(pair.dfta.alphabet(), names,
                 pair.dfta.state_name(pair.dfta.initial()), specs);

    Verdict v = check_equivalence(mutated, pair.left, pair.right);
    auto dist = bounded_equiv(mutated, pair.left, pair.right, 9);
    if (dist.has_value()) {
      CHECK_FALSE(v.equivalent);
    }
    if (!v.equivalent) {
      CHECK(mutated.accepts(pair.left, *v.witness) !=
            mutated.accepts(pair.right, *v.witness));
    }
  }
  CHECK(perturbed >= 40);
}

TEST_CASE("acceptance_masks matches accepts") {
  Dfta d = ex1();
  TreeTable table = enumerate_tree_table(d.alphabet(), 5);
  auto masks = acceptance_masks(d, table);
  REQUIRE(masks.size() == table.size());
  for (std::uint32_t i = 0; i < table.size(); ++i) {
    Tree t = table.materialize(i);
    for (StateId q = 0; q < d.state_count(); ++q) {
      CHECK(((masks[i] >> q) & 1) == (d.accepts(q, t) ? 1u : 0u));
    }
  }
}

TEST_CASE("parallel_chain_dfta builds the scaling family") {
  Dfta d = parallel_chain_dfta(10);
  CHECK(d.size() == 106);
  auto [u0, v0] = parallel_chain_heads(d);
  CHECK(nonempty_states(d).count() == d.state_count());
  CHECK(check_equivalence(d, u0, v0).equivalent);
}
