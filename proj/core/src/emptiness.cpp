#include "treq/emptiness.hpp"

#include <deque>
#include <stdexcept>

#include "treq/errors.hpp"

namespace treq {

Tree NonEmptyResult::witness(StateId q) const {
  if (q >= firing_symbol_.size() || firing_symbol_[q] < 0) {
    throw std::logic_error("witness requested for an empty-language state");
  }
  Tree t{alphabet_.name(static_cast<SymbolId>(firing_symbol_[q])), {}};
  t.children.reserve(firing_children_[q].size());
  for (StateId c : firing_children_[q]) {
    t.children.push_back(witness(c));
  }
  return t;
}

NonEmptyResult nonempty_states(const Dfta& dfta, EmptinessStats* stats) {
  const auto rules = dfta.rules();
  const std::size_t n_states = dfta.state_count();

  NonEmptyResult result;
  result.alphabet_ = dfta.alphabet();
  result.firing_symbol_.assign(n_states, -1);
  result.firing_children_.resize(n_states);

  if (stats != nullptr) {
    stats->state_pushes.assign(n_states, 0);
    stats->rule_checks.assign(rules.size(), 0);
  }

  std::deque<StateId> worklist;
  auto mark = [&](StateId q, const Rule& rule) {
    result.firing_symbol_[q] = static_cast<std::int32_t>(rule.symbol);
    result.firing_children_[q] = rule.children;
    result.order_.push_back(q);
    worklist.push_back(q);
    if (stats != nullptr) ++stats->state_pushes[q];
  };

  // One countdown per rule: child occurrences not yet known non-empty.
  // A state occurring twice among one rule's children counts twice, and is
  // decremented once per occurrence, so a rule fires exactly when the
  // countdown hits zero.
  std::vector<std::uint32_t> countdown(rules.size());
  // Dependency map in flat CSR form: for each state, the rules (one entry
  // per child occurrence) in which it appears as a child.
  std::vector<std::uint32_t> dep_begin(n_states + 1, 0);
  for (const Rule& r : rules) {
    for (StateId c : r.children) ++dep_begin[c + 1];
  }
  for (std::size_t q = 1; q <= n_states; ++q) dep_begin[q] += dep_begin[q - 1];
  std::vector<std::uint32_t> dep_rule(dep_begin[n_states]);
  {
    std::vector<std::uint32_t> cursor(dep_begin.begin(), dep_begin.end() - 1);
    for (std::size_t i = 0; i < rules.size(); ++i) {
      for (StateId c : rules[i].children) {
        dep_rule[cursor[c]++] = static_cast<std::uint32_t>(i);
      }
    }
  }

  // Rules are stored sorted by (source, symbol), so the scan below and the
  // FIFO worklist make discovery order and witnesses deterministic.
  for (std::size_t i = 0; i < rules.size(); ++i) {
    const Rule& r = rules[i];
    countdown[i] = static_cast<std::uint32_t>(r.children.size());
    if (r.children.empty() && result.firing_symbol_[r.source] < 0) {
      mark(r.source, r);
    }
  }

  while (!worklist.empty()) {
    StateId q = worklist.front();
    worklist.pop_front();
    for (std::uint32_t k = dep_begin[q]; k < dep_begin[q + 1]; ++k) {
      std::uint32_t ri = dep_rule[k];
      if (stats != nullptr) ++stats->rule_checks[ri];
      if (--countdown[ri] == 0) {
        const Rule& r = rules[ri];
        if (result.firing_symbol_[r.source] < 0) mark(r.source, r);
      }
    }
  }

  return result;
}

bool is_empty(const Dfta& dfta, StateId q) {
  if (q >= dfta.state_count()) {
    throw ValidationError(ErrorCode::UnknownState, "unknown state id");
  }
  return !nonempty_states(dfta).contains(q);
}

}  // namespace treq
