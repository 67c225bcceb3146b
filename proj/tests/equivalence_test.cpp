#include <doctest.h>

#include <algorithm>
#include <random>

#include "support/test_support.hpp"
#include "treq/equivalence.hpp"
#include "treq/errors.hpp"
#include "treq/oracle.hpp"
#include "treq/text_format.hpp"

using namespace treq;

namespace {

Dfta ex1() { return parse_dfta(test::kEx1); }

GenConfig small_config(std::uint64_t seed, std::mt19937_64& rng) {
  GenConfig cfg;
  cfg.state_count = 2 + static_cast<std::uint32_t>(rng() % 9);
  cfg.symbol_arities = {0, 0, 1, 2};
  cfg.rules_min = 0;
  cfg.rules_max = 3;
  cfg.seed = seed;
  return cfg;
}

}  // namespace

TEST_CASE("trim removes exactly the rules with empty-language children") {
  Dfta d = ex1();
  TrimmedDfta t = trim(d);

  CHECK(t.base.rules().size() == 8);  // ex1 minus (u, g) -> g(dead)
  CHECK(t.base.find_rule(*d.find_state("u"), *d.alphabet().find("g")) ==
        nullptr);
  std::vector<std::string> empties;
  for (StateId q : t.empty_states) empties.push_back(d.state_name(q));
  CHECK(empties == std::vector<std::string>{"dead", "u"});

  SUBCASE("an automaton with no empty states is unchanged") {
    TrimmedDfta t2 = trim(t.base);
    CHECK(t2.base.rules().size() == t.base.rules().size());
    CHECK(t2.base == t.base);
  }
  SUBCASE("zero rules puts every state in empty_states") {
    Dfta z = parse_dfta("alphabet: a/0\nstates: x y\ninitial: x\nrules:\n");
    CHECK(trim(z).empty_states.size() == 2);
  }
  SUBCASE("in the trimmed automaton, empty language means no rules") {
    for (StateId q = 0; q < t.base.state_count(); ++q) {
      CHECK(t.base.rules_of(q).empty() == t.is_empty_state(q));
    }
  }
}

TEST_CASE("trimming preserves every state's language") {
  std::mt19937_64 rng(311);
  std::vector<Dfta> automata;
  automata.push_back(ex1());
  for (int i = 0; i < 10; ++i) {
    automata.push_back(random_dfta(small_config(rng(), rng)));
  }
  for (const Dfta& d : automata) {
    TrimmedDfta t = trim(d);
    auto trees = enumerate_trees(d.alphabet(), 7);
    for (StateId q = 0; q < d.state_count(); ++q) {
      for (const Tree& tree : trees) {
        CHECK(d.accepts(q, tree) == t.base.accepts(q, tree));
      }
    }
  }
}

TEST_CASE("build_equation_system on ex1") {
  Dfta d = ex1();
  TrimmedDfta t = trim(d);
  StateId p = *d.find_state("p");
  StateId q = *d.find_state("q");
  StateId s = *d.find_state("s");
  SymbolId a = *d.alphabet().find("a");
  SymbolId b = *d.alphabet().find("b");
  SymbolId f = *d.alphabet().find("f");
  StateId r = *d.find_state("r");

  EquationSystem sys(t, p, q);
  // eqs(p).body = { a -> (), f -> (r, r) }, and q's is identical.
  DefiningEquation expected{{{a, {}}, {f, {r, r}}}};
  CHECK(sys.defining(p) == expected);
  CHECK(sys.defining(q) == expected);
  CHECK(sys.pending_count() == 1);
  // 6 live classes; p, q, r, s have non-empty bodies; 6 defining + 1 goal.
  CHECK(sys.metrics() == IterationMetrics{6, 4, 7});

  SUBCASE("eqs(s) has the b entry instead of a") {
    EquationSystem sys2(t, p, s);
    DefiningEquation expected_s{{{b, {}}, {f, {r, r}}}};
    CHECK(sys2.defining(s) == expected_s);
  }
  SUBCASE("empty goal states are rejected") {
    CHECK_THROWS_AS(EquationSystem(t, *d.find_state("u"), p),
                    std::logic_error);
  }
}

TEST_CASE("step walkthrough for the equivalent pair (p, q)") {
  Dfta d = ex1();
  TrimmedDfta t = trim(d);
  StateId p = *d.find_state("p");
  StateId q = *d.find_state("q");
  StateId r = *d.find_state("r");

  EquationSystem sys(t, p, q);

  // Pop the goal: bodies match, classes merge, restoration queues the
  // child pair (r, r) twice (once per position under f).
  StepResult s1 = sys.step();
  CHECK(s1.kind == StepResult::Kind::Continue);
  CHECK(s1.merged);
  CHECK(sys.pending_count() == 2);
  CHECK(sys.representative(p) == sys.representative(q));
  CHECK(sys.metrics() == IterationMetrics{5, 3, 7});  // 6 defining - 1, 2 pending

  // Both (r, r) equalities resolve reflexively.
  StepResult s2 = sys.step();
  CHECK(s2.kind == StepResult::Kind::Continue);
  CHECK_FALSE(s2.merged);
  StepResult s3 = sys.step();
  CHECK(s3.kind == StepResult::Kind::Continue);
  CHECK_FALSE(s3.merged);
  CHECK(sys.representative(r) == r);

  StepResult s4 = sys.step();
  CHECK(s4.kind == StepResult::Kind::Done);
}

TEST_CASE("step detects the (p, s) conflict at the goal") {
  Dfta d = ex1();
  TrimmedDfta t = trim(d);
  StateId p = *d.find_state("p");
  StateId s = *d.find_state("s");

  EquationSystem sys(t, p, s);
  StepResult res = sys.step();
  CHECK(res.kind == StepResult::Kind::Conflict);
  CHECK(res.left == p);
  CHECK(res.right == s);
  // a is first in sorted order within the symmetric difference {a, b}.
  CHECK(d.alphabet().name(res.symbol) == "a");
}

TEST_CASE("an empty pending queue reports Done") {
  Dfta d = ex1();
  TrimmedDfta t = trim(d);
  StateId p = *d.find_state("p");
  EquationSystem sys(t, p, *d.find_state("q"));
  while (sys.step().kind == StepResult::Kind::Continue) {
  }
  CHECK(sys.step().kind == StepResult::Kind::Done);
}

TEST_CASE("check_equivalence on ex1") {
  Dfta d = ex1();
  auto state = [&](const char* n) { return *d.find_state(n); };

  CHECK(check_equivalence(d, state("p"), state("q")).equivalent);
  CHECK(check_equivalence(d, state("u"), state("dead")).equivalent);
  CHECK(check_equivalence(d, state("p"), state("p")).equivalent);

  SUBCASE("(p, s): witness is the constant a") {
    Verdict v = check_equivalence(d, state("p"), state("s"));
    REQUIRE_FALSE(v.equivalent);
    CHECK(render_tree(*v.witness) == "a");
    CHECK(d.accepts(state("p"), *v.witness));
    CHECK_FALSE(d.accepts(state("s"), *v.witness));
    REQUIRE(v.conflict.has_value());
    CHECK(v.conflict->left == state("p"));
    CHECK(v.conflict->right == state("s"));
  }
  SUBCASE("(p, dead): one side empty, witness from the emptiness pass") {
    Verdict v = check_equivalence(d, state("p"), state("dead"));
    REQUIRE_FALSE(v.equivalent);
    CHECK(render_tree(*v.witness) == "a");
  }
  SUBCASE("unknown states are rejected") {
    CHECK_THROWS_AS(check_equivalence(d, state("p"), 17), ValidationError);
  }
}

TEST_CASE("extract_witness fills sibling positions with emptiness witnesses") {
  // Conflict one level below the goal, in the first position under f; the
  // second position is filled with the sibling's emptiness witness.
  Dfta d = parse_dfta(
      "alphabet: f/2 a/0 b/0 c/0\n"
      "states: x y xa xb xc\n"
      "initial: x\n"
      "rules:\n"
      "  x f -> xa xc\n"
      "  y f -> xb xc\n"
      "  xa a ->\n"
      "  xb b ->\n"
      "  xc c ->\n");
  StateId x = *d.find_state("x");
  StateId y = *d.find_state("y");

  Verdict v = check_equivalence(d, x, y);
  REQUIRE_FALSE(v.equivalent);
  CHECK(render_tree(*v.witness) == "f(a,c)");
  CHECK(d.accepts(x, *v.witness) != d.accepts(y, *v.witness));
  REQUIRE(v.conflict.has_value());
  CHECK(d.state_name(v.conflict->left) == "xa");
  CHECK(d.state_name(v.conflict->right) == "xb");
  CHECK(d.alphabet().name(v.conflict->symbol) == "a");

  SUBCASE("polarity flips when the conflict symbol is on the right side") {
    Verdict w = check_equivalence(d, y, x);
    REQUIRE_FALSE(w.equivalent);
    CHECK(render_tree(*w.witness) == "f(a,c)");
    CHECK(d.accepts(x, *w.witness) != d.accepts(y, *w.witness));
  }
}

TEST_CASE("verdicts form an equivalence relation") {
  std::mt19937_64 rng(422);
  std::vector<Dfta> automata;
  automata.push_back(ex1());
  for (int i = 0; i < 15; ++i) {
    automata.push_back(random_dfta(small_config(rng(), rng)));
  }
  for (const Dfta& d : automata) {
    TrimmedDfta t = trim(d);
    std::size_t n = d.state_count();
    std::vector<std::vector<bool>> eq(n, std::vector<bool>(n));
    for (StateId a = 0; a < n; ++a) {
      for (StateId b = 0; b < n; ++b) {
        eq[a][b] = check_equivalence(t, a, b).equivalent;
      }
    }
    for (StateId a = 0; a < n; ++a) {
      CHECK(eq[a][a]);
      for (StateId b = 0; b < n; ++b) {
        CHECK(eq[a][b] == eq[b][a]);
        for (StateId c = 0; c < n; ++c) {
          if (eq[a][b] && eq[b][c]) CHECK(eq[a][c]);
        }
      }
    }
  }
}

TEST_CASE("verdicts are invariant under rule reordering") {
  std::mt19937_64 rng(5150);
  std::vector<Dfta> automata;
  automata.push_back(ex1());
  for (int i = 0; i < 8; ++i) {
    automata.push_back(random_dfta(small_config(rng(), rng)));
  }
  for (const Dfta& d : automata) {
    std::vector<RuleSpec> specs;
    for (const Rule& r : d.rules()) {
      RuleSpec spec;
      spec.source = d.state_name(r.source);
      spec.symbol = d.alphabet().name(r.symbol);
      for (StateId c : r.children) spec.children.push_back(d.state_name(c));
      specs.push_back(std::move(spec));
    }
    std::vector<std::string> names(d.state_names().begin(),
                                   d.state_names().end());
    for (int shuffle = 0; shuffle < 3; ++shuffle) {
      std::shuffle(specs.begin(), specs.end(), rng);
      Dfta permuted(d.alphabet(), names, d.state_name(d.initial()), specs);
      CHECK(permuted == d);
      for (StateId a = 0; a < d.state_count(); ++a) {
        for (StateId b = 0; b < d.state_count(); ++b) {
          CHECK(check_equivalence(permuted, a, b).equivalent ==
                check_equivalence(d, a, b).equivalent);
        }
      }
    }
  }
}

TEST_CASE("equivalent verdicts merge only states with equal bounded languages") {
  // When the loop reaches Done, assigning each state its language solves
  // the residual system; merged classes must agree on all small trees.
  std::mt19937_64 rng(8128);
  int checked = 0;
  for (int i = 0; i < 80; ++i) {
    Dfta d = random_dfta(small_config(rng(), rng));
    TrimmedDfta t = trim(d);
    auto langs = test::bounded_languages(d, 7);
    for (StateId a = 0; a < d.state_count(); ++a) {
      for (StateId b = a + 1; b < d.state_count(); ++b) {
        if (t.is_empty_state(a) || t.is_empty_state(b)) continue;
        EquationSystem sys(t, a, b);
        StepResult res = sys.step();
        while (res.kind == StepResult::Kind::Continue) res = sys.step();
        if (res.kind != StepResult::Kind::Done) continue;
        ++checked;
        for (StateId x = 0; x < d.state_count(); ++x) {
          for (StateId y = x + 1; y < d.state_count(); ++y) {
            if (sys.representative(x) == sys.representative(y)) {
              CHECK(langs[x] == langs[y]);
            }
          }
        }
      }
    }
  }
  CHECK(checked > 20);
}

TEST_CASE("metrics strictly decrease lexicographically on merging steps") {
  std::mt19937_64 rng(1969);
  for (int i = 0; i < 30; ++i) {
    Dfta d = random_dfta(small_config(rng(), rng));
    TrimmedDfta t = trim(d);
    for (StateId a = 0; a < d.state_count(); ++a) {
      for (StateId b = a + 1; b < d.state_count(); ++b) {
        if (t.is_empty_state(a) || t.is_empty_state(b)) continue;
        EquationSystem sys(t, a, b);
        for (;;) {
          IterationMetrics before = sys.metrics();
          StepResult res = sys.step();
          if (res.kind != StepResult::Kind::Continue) break;
          if (res.merged) {
            CHECK(sys.metrics() < before);
          }
        }
      }
    }
  }
}

TEST_CASE("witnesses from random conflicts are valid distinguishers") {
  std::mt19937_64 rng(31337);
  int not_equivalent = 0;
  for (int i = 0; i < 60; ++i) {
    Dfta d = random_dfta(small_config(rng(), rng));
    TrimmedDfta t = trim(d);
    for (StateId a = 0; a < d.state_count(); ++a) {
      for (StateId b = a + 1; b < d.state_count(); ++b) {
        Verdict v = check_equivalence(t, a, b);
        if (v.equivalent) continue;
        ++not_equivalent;
        REQUIRE(v.witness.has_value());
        CHECK(d.accepts(a, *v.witness) != d.accepts(b, *v.witness));
      }
    }
  }
  CHECK(not_equivalent > 100);
}
