#include "treq/equivalence.hpp"

#include <cassert>
#include <stdexcept>
#include <utility>

#include "treq/errors.hpp"

namespace treq {

namespace {

std::uint64_t pair_key(StateId l, StateId r) {
  return (static_cast<std::uint64_t>(l) << 32) | r;
}

}  // namespace

TrimmedDfta trim(const Dfta& dfta) {
  NonEmptyResult nonempty = nonempty_states(dfta);

  std::vector<Rule> kept;
  kept.reserve(dfta.rules().size());
  for (const Rule& r : dfta.rules()) {
    bool viable = true;
    for (StateId c : r.children) {
      if (!nonempty.contains(c)) {
        viable = false;
        break;
      }
    }
    // A rule with an empty-language child can never complete a run, so
    // dropping it changes no state's language.
    if (viable) kept.push_back(r);
  }

  std::vector<std::string> names(dfta.state_names().begin(),
                                 dfta.state_names().end());
  Dfta base(dfta.alphabet(), std::move(names), dfta.initial(), std::move(kept));

  std::vector<StateId> empty_states;
  for (StateId q = 0; q < dfta.state_count(); ++q) {
    if (!nonempty.contains(q)) empty_states.push_back(q);
  }
  return TrimmedDfta{std::move(base), std::move(empty_states),
                     std::move(nonempty)};
}

const DefiningEquation::Entry* DefiningEquation::find(SymbolId f) const {
  for (const Entry& e : entries) {
    if (e.symbol == f) return &e;
    if (e.symbol > f) break;
  }
  return nullptr;
}

EquationSystem::EquationSystem(const TrimmedDfta& trimmed, StateId a,
                               StateId b)
    : trimmed_(&trimmed),
      uf_(trimmed.base.state_count()),
      goal_left_(a),
      goal_right_(b) {
  if (a >= trimmed.base.state_count() || b >= trimmed.base.state_count()) {
    throw ValidationError(ErrorCode::UnknownState, "unknown state id");
  }
  if (trimmed.is_empty_state(a) || trimmed.is_empty_state(b)) {
    throw std::logic_error(
        "equation system requires non-empty goal states; dispatch empty "
        "states before building");
  }

  const std::size_t n = trimmed.base.state_count();
  bodies_.resize(n);
  std::size_t nonempty_bodies = 0;
  for (StateId q = 0; q < n; ++q) {
    auto rules = trimmed.base.rules_of(q);
    if (rules.empty()) continue;
    DefiningEquation& eq = bodies_[q];
    eq.entries.reserve(rules.size());
    for (const Rule& r : rules) {  // sorted by symbol
      eq.entries.push_back({r.symbol, r.children});
    }
    ++nonempty_bodies;
  }

  pending_.push_back(PendingEquality{a, b, std::nullopt});
  metrics_ = IterationMetrics{n, nonempty_bodies, n + 1};
}

const DefiningEquation& EquationSystem::defining(StateId q) {
  return bodies_[uf_.find(q)];
}

const Provenance& EquationSystem::merge_provenance(StateId l, StateId r) const {
  auto it = merge_log_.find(pair_key(l, r));
  if (it == merge_log_.end()) {
    throw std::logic_error("no merge recorded for the given pair");
  }
  return it->second;
}

StepResult EquationSystem::step() {
  if (conflict_.has_value()) {
    return {StepResult::Kind::Conflict, false, conflict_->left,
            conflict_->right, conflict_->symbol};
  }
  if (pending_.empty()) {
    return {StepResult::Kind::Done};
  }

  PendingEquality eq = std::move(pending_.front());
  pending_.pop_front();
  metrics_.total_equations -= 1;

  StateId rl = uf_.find(eq.left);
  StateId rr = uf_.find(eq.right);
  if (rl == rr) {
    return {StepResult::Kind::Continue, false};
  }

  // Conflict detection: the two class bodies must enable the same symbols.
  // Every member of a class has the same enabled-symbol set as its class
  // body (merges only ever join classes with equal key sets), and after
  // trimming an enabled symbol is exactly a possible language top symbol.
  const DefiningEquation& bl = bodies_[rl];
  const DefiningEquation& br = bodies_[rr];
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < bl.entries.size() || j < br.entries.size()) {
    SymbolId sl = i < bl.entries.size() ? bl.entries[i].symbol
                                        : static_cast<SymbolId>(-1);
    SymbolId sr = j < br.entries.size() ? br.entries[j].symbol
                                        : static_cast<SymbolId>(-1);
    if (sl == sr) {
      ++i;
      ++j;
      continue;
    }
    SymbolId mismatch = sl < sr ? sl : sr;  // smallest symbol in the
                                            // symmetric difference
    conflict_ = ConflictRecord{eq.left, eq.right, mismatch, eq.provenance};
    return {StepResult::Kind::Conflict, false, eq.left, eq.right, mismatch};
  }

  // Substitution: identify the two variables. Union by size; the larger
  // class keeps its body, the other body is discarded (its content is
  // preserved by the child equalities queued below).
  StateId survivor = uf_.unite(rl, rr);
  StateId dropped = survivor == rl ? rr : rl;
  if (!bodies_[dropped].empty()) metrics_.nonempty_bodies -= 1;
  bodies_[dropped] = DefiningEquation{};
  metrics_.live_classes -= 1;
  metrics_.total_equations -= 1;

  // Restoration: equate children positionwise per shared symbol. The
  // tuples come from the popped pair's own rules (their key sets equal the
  // class bodies', see above); this keeps every provenance link anchored
  // at actual automaton rules, which is what witness extraction replays.
  const Dfta& base = trimmed_->base;
  for (const Rule& rule_l : base.rules_of(eq.left)) {
    const Rule* rule_r = base.find_rule(eq.right, rule_l.symbol);
    assert(rule_r != nullptr);
    for (std::uint32_t pos = 0; pos < rule_l.children.size(); ++pos) {
      pending_.push_back(PendingEquality{
          rule_l.children[pos], rule_r->children[pos],
          ChildProvenance{eq.left, eq.right, rule_l.symbol, pos}});
      metrics_.total_equations += 1;
    }
  }

  merge_log_.emplace(pair_key(eq.left, eq.right), eq.provenance);
  return {StepResult::Kind::Continue, true};
}

Tree extract_witness(const EquationSystem& sys,
                     const EquationSystem::ConflictRecord& conflict,
                     const TrimmedDfta& trimmed,
                     const NonEmptyResult& witnesses) {
  const Dfta& base = trimmed.base;

  // Leaf: a tree rooted at the conflict symbol exists on exactly the side
  // whose state enables it; no tree from the other side has that root.
  const Rule* leaf_rule = base.find_rule(conflict.left, conflict.symbol);
  bool accepted_on_left = leaf_rule != nullptr;
  if (leaf_rule == nullptr) {
    leaf_rule = base.find_rule(conflict.right, conflict.symbol);
  }
  if (leaf_rule == nullptr) {
    throw std::logic_error("conflict symbol enabled on neither side");
  }
  Tree tree{base.alphabet().name(conflict.symbol), {}};
  tree.children.reserve(leaf_rule->children.size());
  for (StateId c : leaf_rule->children) {
    tree.children.push_back(witnesses.witness(c));
  }

  // Wrap the leaf in the context recorded by the provenance chain. At each
  // level the tree so far distinguishes the popped pair; plugging it into
  // the accepting side's rule (emptiness witnesses at the other positions)
  // distinguishes the parent pair, with the same side accepting.
  Provenance prov = conflict.provenance;
  while (prov.has_value()) {
    StateId parent =
        accepted_on_left ? prov->parent_left : prov->parent_right;
    const Rule* rule = base.find_rule(parent, prov->symbol);
    if (rule == nullptr) {
      throw std::logic_error("provenance refers to a missing rule");
    }
    Tree wrapped{base.alphabet().name(prov->symbol), {}};
    wrapped.children.reserve(rule->children.size());
    for (std::uint32_t pos = 0; pos < rule->children.size(); ++pos) {
      if (pos == prov->position) {
        wrapped.children.push_back(std::move(tree));
      } else {
        wrapped.children.push_back(witnesses.witness(rule->children[pos]));
      }
    }
    tree = std::move(wrapped);
    prov = sys.merge_provenance(prov->parent_left, prov->parent_right);
  }

  assert(base.accepts(sys.goal_left(), tree) !=
         base.accepts(sys.goal_right(), tree));
  return tree;
}

namespace {

Verdict not_equivalent(Tree witness, StateId a, StateId b, SymbolId symbol) {
  Verdict v;
  v.equivalent = false;
  v.conflict = Verdict::ConflictSite{a, b, symbol};
  v.witness = std::move(witness);
  return v;
}

}  // namespace

Verdict check_equivalence(const TrimmedDfta& trimmed, StateId a, StateId b) {
  if (a >= trimmed.base.state_count() || b >= trimmed.base.state_count()) {
    throw ValidationError(ErrorCode::UnknownState, "unknown state id");
  }
  if (a == b) return Verdict{};

  const bool empty_a = trimmed.is_empty_state(a);
  const bool empty_b = trimmed.is_empty_state(b);
  if (empty_a && empty_b) return Verdict{};
  if (empty_a != empty_b) {
    Tree witness = trimmed.nonempty.witness(empty_a ? b : a);
    SymbolId root = *trimmed.base.alphabet().find(witness.symbol);
    return not_equivalent(std::move(witness), a, b, root);
  }

  EquationSystem sys(trimmed, a, b);
  for (;;) {
    StepResult r = sys.step();
    if (r.kind == StepResult::Kind::Done) return Verdict{};
    if (r.kind == StepResult::Kind::Conflict) {
      Tree witness =
          extract_witness(sys, *sys.conflict(), trimmed, trimmed.nonempty);
      return not_equivalent(std::move(witness), r.left, r.right, r.symbol);
    }
  }
}

Verdict check_equivalence(const Dfta& dfta, StateId a, StateId b) {
  if (a >= dfta.state_count() || b >= dfta.state_count()) {
    throw ValidationError(ErrorCode::UnknownState, "unknown state id");
  }
  TrimmedDfta trimmed = trim(dfta);
  return check_equivalence(trimmed, a, b);
}

}  // namespace treq
