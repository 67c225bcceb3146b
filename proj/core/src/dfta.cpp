#include "treq/dfta.hpp"

#include <algorithm>

#include "treq/errors.hpp"

namespace treq {

namespace {

std::vector<std::string> sorted_unique_states(std::vector<std::string> states) {
  for (const std::string& s : states) {
    if (!is_identifier(s)) {
      throw ValidationError(ErrorCode::InvalidIdentifier,
                            "invalid state name: '" + s + "'");
    }
  }
  std::sort(states.begin(), states.end());
  auto dup = std::adjacent_find(states.begin(), states.end());
  if (dup != states.end()) {
    throw ValidationError(ErrorCode::DuplicateState, "duplicate state: " + *dup);
  }
  return states;
}

}  // namespace

Dfta::Dfta(Alphabet alphabet, std::vector<std::string> states,
           const std::string& initial, const std::vector<RuleSpec>& rules)
    : alphabet_(std::move(alphabet)),
      state_names_(sorted_unique_states(std::move(states))) {
  auto init = find_state(initial);
  if (!init) {
    throw ValidationError(ErrorCode::InitialNotAState,
                          "initial state not declared: " + initial);
  }
  initial_ = *init;

  rules_.reserve(rules.size());
  for (const RuleSpec& spec : rules) {
    Rule rule;
    auto src = find_state(spec.source);
    if (!src) {
      throw ValidationError(ErrorCode::UnknownState,
                            "unknown state: " + spec.source);
    }
    rule.source = *src;
    auto sym = alphabet_.find(spec.symbol);
    if (!sym) {
      throw ValidationError(ErrorCode::UnknownSymbol,
                            "unknown symbol: " + spec.symbol);
    }
    rule.symbol = *sym;
    int arity = alphabet_.arity(*sym);
    if (static_cast<std::size_t>(arity) != spec.children.size()) {
      throw ValidationError(
          ErrorCode::ArityMismatch,
          "arity mismatch: symbol '" + spec.symbol + "' has arity " +
              std::to_string(arity) + " but the rule lists " +
              std::to_string(spec.children.size()) + " children");
    }
    rule.children.reserve(spec.children.size());
    for (const std::string& child : spec.children) {
      auto c = find_state(child);
      if (!c) {
        throw ValidationError(ErrorCode::UnknownState,
                              "unknown state: " + child);
      }
      rule.children.push_back(*c);
    }
    rules_.push_back(std::move(rule));
  }
  index_rules();
}

Dfta::Dfta(Alphabet alphabet, std::vector<std::string> states, StateId initial,
           std::vector<Rule> rules)
    : alphabet_(std::move(alphabet)),
      state_names_(std::move(states)),
      initial_(initial),
      rules_(std::move(rules)) {
  if (!std::is_sorted(state_names_.begin(), state_names_.end()) ||
      std::adjacent_find(state_names_.begin(), state_names_.end()) !=
          state_names_.end()) {
    throw ValidationError(ErrorCode::DuplicateState,
                          "state list must be sorted and duplicate-free");
  }
  for (const std::string& s : state_names_) {
    if (!is_identifier(s)) {
      throw ValidationError(ErrorCode::InvalidIdentifier,
                            "invalid state name: '" + s + "'");
    }
  }
  if (initial_ >= state_names_.size()) {
    throw ValidationError(ErrorCode::InitialNotAState,
                          "initial state id out of range");
  }
  for (const Rule& r : rules_) {
    if (r.source >= state_names_.size()) {
      throw ValidationError(ErrorCode::UnknownState, "rule source out of range");
    }
    if (r.symbol >= alphabet_.size()) {
      throw ValidationError(ErrorCode::UnknownSymbol, "rule symbol out of range");
    }
    if (static_cast<std::size_t>(alphabet_.arity(r.symbol)) !=
        r.children.size()) {
      throw ValidationError(ErrorCode::ArityMismatch,
                            "arity mismatch: symbol '" +
                                alphabet_.name(r.symbol) + "' has arity " +
                                std::to_string(alphabet_.arity(r.symbol)) +
                                " but the rule lists " +
                                std::to_string(r.children.size()) + " children");
    }
    for (StateId c : r.children) {
      if (c >= state_names_.size()) {
        throw ValidationError(ErrorCode::UnknownState,
                              "rule child out of range");
      }
    }
  }
  index_rules();
}

void Dfta::index_rules() {
  std::sort(rules_.begin(), rules_.end(), [](const Rule& a, const Rule& b) {
    return a.source != b.source ? a.source < b.source : a.symbol < b.symbol;
  });
  for (std::size_t i = 1; i < rules_.size(); ++i) {
    if (rules_[i - 1].source == rules_[i].source &&
        rules_[i - 1].symbol == rules_[i].symbol) {
      throw ValidationError(ErrorCode::DuplicateLhs,
                            "duplicate left-hand side: (" +
                                state_names_[rules_[i].source] + ", " +
                                alphabet_.name(rules_[i].symbol) + ")");
    }
  }

  rule_index_.assign(state_names_.size() * alphabet_.size(), -1);
  rules_begin_.assign(state_names_.size() + 1, 0);
  for (std::size_t i = 0; i < rules_.size(); ++i) {
    const Rule& r = rules_[i];
    rule_index_[r.source * alphabet_.size() + r.symbol] =
        static_cast<std::int32_t>(i);
    ++rules_begin_[r.source + 1];
  }
  for (std::size_t q = 1; q < rules_begin_.size(); ++q) {
    rules_begin_[q] += rules_begin_[q - 1];
  }
}

std::optional<StateId> Dfta::find_state(std::string_view name) const {
  auto it = std::lower_bound(state_names_.begin(), state_names_.end(), name);
  if (it == state_names_.end() || *it != name) return std::nullopt;
  return static_cast<StateId>(it - state_names_.begin());
}

std::span<const Rule> Dfta::rules_of(StateId q) const {
  return {rules_.data() + rules_begin_[q], rules_.data() + rules_begin_[q + 1]};
}

const Rule* Dfta::find_rule(StateId q, SymbolId f) const {
  std::int32_t i = rule_index_[q * alphabet_.size() + f];
  return i < 0 ? nullptr : &rules_[static_cast<std::size_t>(i)];
}

std::size_t Dfta::size() const {
  std::size_t n = state_names_.size();
  for (const Rule& r : rules_) n += 2 + r.children.size();
  return n;
}

bool Dfta::accepts(StateId q, const Tree& t) const {
  if (q >= state_names_.size()) {
    throw ValidationError(ErrorCode::UnknownState, "unknown state id");
  }
  return accepts_impl(q, t);
}

bool Dfta::accepts_impl(StateId q, const Tree& t) const {
  auto sym = alphabet_.find(t.symbol);
  if (!sym) {
    throw ValidationError(ErrorCode::UnknownSymbol,
                          "unknown symbol: " + t.symbol);
  }
  if (static_cast<std::size_t>(alphabet_.arity(*sym)) != t.children.size()) {
    throw ValidationError(ErrorCode::ArityMismatch,
                          "arity mismatch in tree at symbol: " + t.symbol);
  }
  const Rule* rule = find_rule(q, *sym);
  if (rule == nullptr) return false;
  // Determinism: this is the only candidate rule, so the run is unique and
  // each tree node is visited at most once.
  for (std::size_t i = 0; i < t.children.size(); ++i) {
    if (!accepts_impl(rule->children[i], t.children[i])) return false;
  }
  return true;
}

}  // namespace treq
