#include "treq/oracle.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <random>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "treq/errors.hpp"

namespace treq {

std::span<const std::uint32_t> TreeTable::children(std::uint32_t i) const {
  const Row& r = rows_[i];
  int arity = alphabet_.arity(r.symbol);
  return {child_pool_.data() + r.children_begin,
          static_cast<std::size_t>(arity)};
}

Tree TreeTable::materialize(std::uint32_t i) const {
  const Row& r = rows_[i];
  Tree t{alphabet_.name(r.symbol), {}};
  auto kids = children(i);
  t.children.reserve(kids.size());
  for (std::uint32_t c : kids) t.children.push_back(materialize(c));
  return t;
}

TreeTable enumerate_tree_table(const Alphabet& alphabet, std::size_t max_nodes,
                               bool lexicographic) {
  if (max_nodes == 0) {
    throw std::invalid_argument("max_nodes must be at least 1");
  }
  TreeTable table;
  table.alphabet_ = alphabet;
  // bucket_begin_[s] = first row holding a tree of exactly s nodes
  // (index 0 unused); bucket_begin_[max_nodes + 1] = total row count.
  table.bucket_begin_.assign(max_nodes + 2, 0);

  std::vector<std::string> rendered;  // per row, only in lexicographic mode

  auto emit = [&](SymbolId f, std::span<const std::uint32_t> kids,
                  std::uint32_t nodes) {
    TreeTable::Row row;
    row.symbol = f;
    row.children_begin = static_cast<std::uint32_t>(table.child_pool_.size());
    row.nodes = nodes;
    table.child_pool_.insert(table.child_pool_.end(), kids.begin(), kids.end());
    table.rows_.push_back(row);
    if (lexicographic) {
      std::string s = alphabet.name(f);
      if (!kids.empty()) {
        s += '(';
        for (std::size_t i = 0; i < kids.size(); ++i) {
          if (i > 0) s += ',';
          s += rendered[kids[i]];
        }
        s += ')';
      }
      rendered.push_back(std::move(s));
    }
  };

  std::vector<std::uint32_t> chosen;
  for (std::uint32_t nodes = 1; nodes <= max_nodes; ++nodes) {
    std::size_t bucket_start = table.rows_.size();
    table.bucket_begin_[nodes] = static_cast<std::uint32_t>(bucket_start);

    for (SymbolId f = 0; f < alphabet.size(); ++f) {
      std::uint32_t arity = static_cast<std::uint32_t>(alphabet.arity(f));
      if (arity == 0) {
        if (nodes == 1) emit(f, {}, 1);
        continue;
      }
      if (nodes < arity + 1) continue;
      chosen.assign(arity, 0);
      // All ways to split nodes-1 among arity children, each at least one
      // node, crossed with every tree of the chosen sizes.
      auto fill = [&](auto&& self, std::uint32_t pos,
                      std::uint32_t remaining) -> void {
        if (pos + 1 == arity) {
          for (std::uint32_t r = table.bucket_begin_[remaining];
               r < table.bucket_begin_[remaining + 1]; ++r) {
            chosen[pos] = r;
            emit(f, chosen, nodes);
          }
          return;
        }
        std::uint32_t slots_after = arity - pos - 1;
        for (std::uint32_t part = 1; part + slots_after <= remaining; ++part) {
          for (std::uint32_t r = table.bucket_begin_[part];
               r < table.bucket_begin_[part + 1]; ++r) {
            chosen[pos] = r;
            self(self, pos + 1, remaining - part);
          }
        }
      };
      fill(fill, 0, nodes - 1);
    }

    std::size_t bucket_size = table.rows_.size() - bucket_start;
    if (lexicographic && bucket_size > 1) {
      std::vector<std::uint32_t> perm(bucket_size);
      std::iota(perm.begin(), perm.end(), 0);
      std::sort(perm.begin(), perm.end(),
                [&](std::uint32_t a, std::uint32_t b) {
                  return rendered[bucket_start + a] <
                         rendered[bucket_start + b];
                });
      std::vector<TreeTable::Row> sorted_rows(bucket_size);
      std::vector<std::string> sorted_strings(bucket_size);
      for (std::size_t i = 0; i < bucket_size; ++i) {
        sorted_rows[i] = table.rows_[bucket_start + perm[i]];
        sorted_strings[i] = std::move(rendered[bucket_start + perm[i]]);
      }
      std::copy(sorted_rows.begin(), sorted_rows.end(),
                table.rows_.begin() + bucket_start);
      std::move(sorted_strings.begin(), sorted_strings.end(),
                rendered.begin() + bucket_start);
    }
    // Children always live in strictly smaller buckets, so sorting this
    // bucket invalidates no reference.
    table.bucket_begin_[nodes + 1] = static_cast<std::uint32_t>(table.rows_.size());
  }
  return table;
}

std::vector<Tree> enumerate_trees(const Alphabet& alphabet,
                                  std::size_t max_nodes) {
  TreeTable table = enumerate_tree_table(alphabet, max_nodes, true);
  std::vector<Tree> trees;
  trees.reserve(table.size());
  for (std::uint32_t i = 0; i < table.size(); ++i) {
    trees.push_back(table.materialize(i));
  }
  return trees;
}

std::vector<std::uint64_t> acceptance_masks(const Dfta& dfta,
                                            const TreeTable& table) {
  if (!(table.alphabet() == dfta.alphabet())) {
    throw std::logic_error("tree table was built over a different alphabet");
  }
  const std::size_t n = dfta.state_count();
  if (n > 64) {
    throw std::logic_error("acceptance_masks supports at most 64 states");
  }
  std::vector<std::uint64_t> masks(table.size(), 0);
  for (std::uint32_t i = 0; i < table.size(); ++i) {
    const auto& row = table.row(i);
    auto kids = table.children(i);
    std::uint64_t m = 0;
    for (StateId q = 0; q < n; ++q) {
      const Rule* rule = dfta.find_rule(q, row.symbol);
      if (rule == nullptr) continue;
      bool ok = true;
      for (std::size_t k = 0; k < kids.size(); ++k) {
        if ((masks[kids[k]] >> rule->children[k] & 1) == 0) {
          ok = false;
          break;
        }
      }
      if (ok) m |= std::uint64_t{1} << q;
    }
    masks[i] = m;
  }
  return masks;
}

std::optional<Tree> bounded_equiv(const Dfta& dfta, StateId a, StateId b,
                                  std::size_t max_nodes) {
  if (a >= dfta.state_count() || b >= dfta.state_count()) {
    throw ValidationError(ErrorCode::UnknownState, "unknown state id");
  }
  if (a == b) return std::nullopt;

  TreeTable table = enumerate_tree_table(dfta.alphabet(), max_nodes, true);
  const std::size_t n = dfta.state_count();
  const std::size_t blocks = (n + 63) / 64;
  std::vector<std::uint64_t> accept(table.size() * blocks, 0);
  auto bit = [&](std::uint32_t row, StateId q) -> bool {
    return accept[row * blocks + q / 64] >> (q % 64) & 1;
  };

  for (std::uint32_t i = 0; i < table.size(); ++i) {
    const auto& row = table.row(i);
    auto kids = table.children(i);
    for (StateId q = 0; q < n; ++q) {
      const Rule* rule = dfta.find_rule(q, row.symbol);
      if (rule == nullptr) continue;
      bool ok = true;
      for (std::size_t k = 0; k < kids.size(); ++k) {
        if (!bit(kids[k], rule->children[k])) {
          ok = false;
          break;
        }
      }
      if (ok) accept[i * blocks + q / 64] |= std::uint64_t{1} << (q % 64);
    }
    if (bit(i, a) != bit(i, b)) return table.materialize(i);
  }
  return std::nullopt;
}

namespace {

std::uint64_t pair_key(StateId l, StateId r) {
  return (static_cast<std::uint64_t>(l) << 32) | r;
}

struct ParentLink {
  StateId left;
  StateId right;
  SymbolId symbol;
  std::uint32_t position;
};

Verdict bfs_not_equivalent(Tree witness, StateId a, StateId b, SymbolId f) {
  Verdict v;
  v.equivalent = false;
  v.conflict = Verdict::ConflictSite{a, b, f};
  v.witness = std::move(witness);
  return v;
}

}  // namespace

Verdict pair_bfs_equiv(const TrimmedDfta& trimmed, StateId a, StateId b) {
  const Dfta& base = trimmed.base;
  if (a >= base.state_count() || b >= base.state_count()) {
    throw ValidationError(ErrorCode::UnknownState, "unknown state id");
  }
  if (a == b) return Verdict{};

  const bool empty_a = trimmed.is_empty_state(a);
  const bool empty_b = trimmed.is_empty_state(b);
  if (empty_a && empty_b) return Verdict{};
  if (empty_a != empty_b) {
    Tree witness = trimmed.nonempty.witness(empty_a ? b : a);
    SymbolId root = *base.alphabet().find(witness.symbol);
    return bfs_not_equivalent(std::move(witness), a, b, root);
  }

  std::unordered_set<std::uint64_t> visited;
  std::unordered_map<std::uint64_t, ParentLink> parent;
  std::deque<std::pair<StateId, StateId>> queue;
  visited.insert(pair_key(a, b));
  queue.emplace_back(a, b);

  while (!queue.empty()) {
    auto [x, y] = queue.front();
    queue.pop_front();

    auto rx = base.rules_of(x);
    auto ry = base.rules_of(y);
    std::size_t i = 0;
    std::size_t j = 0;
    std::optional<SymbolId> mismatch;
    while (i < rx.size() || j < ry.size()) {
      SymbolId sx =
          i < rx.size() ? rx[i].symbol : static_cast<SymbolId>(-1);
      SymbolId sy =
          j < ry.size() ? ry[j].symbol : static_cast<SymbolId>(-1);
      if (sx != sy) {
        mismatch = sx < sy ? sx : sy;
        break;
      }
      ++i;
      ++j;
    }

    if (mismatch.has_value()) {
      // Rebuild the distinguishing tree from the BFS parent chain; the
      // same side keeps accepting all the way up to the queried pair.
      const Rule* leaf = base.find_rule(x, *mismatch);
      bool accepted_on_left = leaf != nullptr;
      if (leaf == nullptr) leaf = base.find_rule(y, *mismatch);
      Tree tree{base.alphabet().name(*mismatch), {}};
      for (StateId c : leaf->children) {
        tree.children.push_back(trimmed.nonempty.witness(c));
      }
      StateId cx = x;
      StateId cy = y;
      while (!(cx == a && cy == b)) {
        const ParentLink& link = parent.at(pair_key(cx, cy));
        StateId side = accepted_on_left ? link.left : link.right;
        const Rule* rule = base.find_rule(side, link.symbol);
        Tree wrapped{base.alphabet().name(link.symbol), {}};
        for (std::uint32_t k = 0; k < rule->children.size(); ++k) {
          if (k == link.position) {
            wrapped.children.push_back(std::move(tree));
          } else {
            wrapped.children.push_back(
                trimmed.nonempty.witness(rule->children[k]));
          }
        }
        tree = std::move(wrapped);
        cx = link.left;
        cy = link.right;
      }
      return bfs_not_equivalent(std::move(tree), x, y, *mismatch);
    }

    for (std::size_t k = 0; k < rx.size(); ++k) {
      const Rule& rule_x = rx[k];
      const Rule& rule_y = ry[k];
      for (std::uint32_t pos = 0; pos < rule_x.children.size(); ++pos) {
        StateId cx = rule_x.children[pos];
        StateId cy = rule_y.children[pos];
        if (cx == cy) continue;
        if (visited.insert(pair_key(cx, cy)).second) {
          parent.emplace(pair_key(cx, cy),
                         ParentLink{x, y, rule_x.symbol, pos});
          queue.emplace_back(cx, cy);
        }
      }
    }
  }
  return Verdict{};
}

namespace {

struct Draft {
  Alphabet alphabet;
  std::vector<std::string> states;
  std::vector<RuleSpec> rules;
};

// Bounded draw via modulo: uniformity is a non-goal, determinism per seed
// is the contract (mt19937_64 output is fully specified by the standard).
std::uint64_t draw(std::mt19937_64& rng, std::uint64_t bound) {
  return bound == 0 ? 0 : rng() % bound;
}

Draft make_draft(const GenConfig& cfg, std::mt19937_64& rng) {
  if (cfg.state_count < 1) {
    throw std::invalid_argument("state_count must be at least 1");
  }
  if (cfg.symbol_arities.empty()) {
    throw std::invalid_argument("at least one symbol is required");
  }
  for (int a : cfg.symbol_arities) {
    if (a < 0 || a > 4) {
      throw std::invalid_argument("symbol arities must be within 0..4");
    }
  }
  if (cfg.rules_min > cfg.rules_max) {
    throw std::invalid_argument("rules_min must not exceed rules_max");
  }

  Draft draft;
  std::vector<RankedSymbol> symbols;
  symbols.reserve(cfg.symbol_arities.size());
  for (std::size_t i = 0; i < cfg.symbol_arities.size(); ++i) {
    symbols.push_back({"s" + std::to_string(i), cfg.symbol_arities[i]});
  }
  draft.alphabet = Alphabet{std::move(symbols)};

  draft.states.reserve(cfg.state_count);
  for (std::uint32_t i = 0; i < cfg.state_count; ++i) {
    draft.states.push_back("q" + std::to_string(i));
  }

  const std::size_t symbol_count = cfg.symbol_arities.size();
  std::vector<std::uint32_t> symbol_order(symbol_count);
  for (const std::string& state : draft.states) {
    std::uint64_t span = cfg.rules_max - cfg.rules_min + 1;
    std::size_t rule_count = static_cast<std::size_t>(
        cfg.rules_min + draw(rng, span));
    rule_count = std::min(rule_count, symbol_count);

    // Left-hand sides sampled without replacement: partial Fisher-Yates.
    std::iota(symbol_order.begin(), symbol_order.end(), 0);
    for (std::size_t j = 0; j < rule_count; ++j) {
      std::size_t k = j + static_cast<std::size_t>(draw(rng, symbol_count - j));
      std::swap(symbol_order[j], symbol_order[k]);
    }

    for (std::size_t j = 0; j < rule_count; ++j) {
      RuleSpec rule;
      rule.source = state;
      rule.symbol = "s" + std::to_string(symbol_order[j]);
      int arity = cfg.symbol_arities[symbol_order[j]];
      for (int c = 0; c < arity; ++c) {
        rule.children.push_back(
            "q" + std::to_string(draw(rng, cfg.state_count)));
      }
      draft.rules.push_back(std::move(rule));
    }
  }
  return draft;
}

}  // namespace

Dfta random_dfta(const GenConfig& cfg) {
  std::mt19937_64 rng(cfg.seed);
  Draft draft = make_draft(cfg, rng);
  return Dfta(std::move(draft.alphabet), std::move(draft.states), "q0",
              draft.rules);
}

EquivPair random_equiv_pair(const GenConfig& cfg) {
  std::mt19937_64 rng(cfg.seed);
  Draft draft = make_draft(cfg, rng);

  std::string original =
      "q" + std::to_string(draw(rng, cfg.state_count));
  std::string clone = original + "_dup";
  draft.states.push_back(clone);
  std::size_t rule_count = draft.rules.size();
  for (std::size_t i = 0; i < rule_count; ++i) {
    if (draft.rules[i].source == original) {
      RuleSpec copy = draft.rules[i];  // children unchanged
      copy.source = clone;
      draft.rules.push_back(std::move(copy));
    }
  }

  Dfta dfta(std::move(draft.alphabet), std::move(draft.states), "q0",
            draft.rules);
  StateId left = *dfta.find_state(original);
  StateId right = *dfta.find_state(clone);
  return EquivPair{std::move(dfta), left, right};
}

Dfta parallel_chain_dfta(std::size_t chain_length) {
  if (chain_length < 1) {
    throw std::invalid_argument("chain_length must be at least 1");
  }
  Alphabet alphabet{{{"f", 2}, {"a", 0}}};
  std::vector<std::string> states;
  std::vector<RuleSpec> rules;
  states.reserve(2 * (chain_length + 1));
  rules.reserve(2 * (chain_length + 1));
  for (const char* prefix : {"u", "v"}) {
    for (std::size_t i = 0; i <= chain_length; ++i) {
      states.push_back(prefix + std::to_string(i));
    }
    for (std::size_t i = 0; i < chain_length; ++i) {
      std::string next = prefix + std::to_string(i + 1);
      rules.push_back({prefix + std::to_string(i), "f", {next, next}});
    }
    rules.push_back({prefix + std::to_string(chain_length), "a", {}});
  }
  return Dfta(std::move(alphabet), std::move(states), "u0", rules);
}

std::pair<StateId, StateId> parallel_chain_heads(const Dfta& d) {
  return {*d.find_state("u0"), *d.find_state("v0")};
}

}  // namespace treq
