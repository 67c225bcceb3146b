#include "treq/text_format.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <utility>
#include <vector>

#include "treq/errors.hpp"

namespace treq {

namespace {

struct Token {
  std::string_view text;
  SourceSpan span;
};

[[noreturn]] void fail(ErrorCode code, std::string message, SourceSpan span) {
  throw ParseError(code, std::move(message), span);
}

// Splits the input into whitespace-separated tokens, one vector per line,
// stripping `#` comments. Rejects non-ASCII bytes and stray control
// characters so rendered files are bit-exact by construction.
std::vector<std::vector<Token>> tokenize_lines(std::string_view text) {
  std::vector<std::vector<Token>> lines;
  std::size_t line_no = 1;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    std::string_view line = text.substr(
        pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
    std::vector<Token> tokens;
    std::size_t i = 0;
    while (i < line.size()) {
      unsigned char c = static_cast<unsigned char>(line[i]);
      if (c == '#') break;
      if (c == ' ' || c == '\t' || c == '\r') {
        ++i;
        continue;
      }
      if (c >= 0x80 || c < 0x20) {
        fail(ErrorCode::Syntax, "non-ASCII or control byte in input",
             {line_no, i + 1});
      }
      std::size_t start = i;
      while (i < line.size()) {
        unsigned char d = static_cast<unsigned char>(line[i]);
        if (d == ' ' || d == '\t' || d == '\r' || d == '#') break;
        if (d >= 0x80 || d < 0x20) {
          fail(ErrorCode::Syntax, "non-ASCII or control byte in input",
               {line_no, i + 1});
        }
        ++i;
      }
      tokens.push_back({line.substr(start, i - start), {line_no, start + 1}});
    }
    if (!tokens.empty()) lines.push_back(std::move(tokens));
    if (eol == std::string_view::npos) break;
    pos = eol + 1;
    ++line_no;
  }
  return lines;
}

// Flat cursor over the tokens of all lines, remembering line boundaries.
class TokenCursor {
 public:
  explicit TokenCursor(const std::vector<std::vector<Token>>& lines) {
    for (std::size_t li = 0; li < lines.size(); ++li) {
      for (const Token& t : lines[li]) {
        tokens_.push_back(t);
        line_of_.push_back(li);
      }
    }
  }

  bool done() const { return pos_ >= tokens_.size(); }
  const Token& peek() const { return tokens_[pos_]; }
  const Token& next() { return tokens_[pos_++]; }
  std::size_t line_index() const { return line_of_[pos_]; }
  SourceSpan end_span() const {
    return tokens_.empty() ? SourceSpan{1, 1} : tokens_.back().span;
  }

 private:
  std::vector<Token> tokens_;
  std::vector<std::size_t> line_of_;
  std::size_t pos_ = 0;
};

std::string expect_identifier(const Token& t) {
  if (!is_identifier(t.text)) {
    fail(ErrorCode::Syntax, "expected identifier, got '" + std::string(t.text) + "'",
         t.span);
  }
  return std::string(t.text);
}

int parse_arity(std::string_view digits, SourceSpan span) {
  if (digits.empty() ||
      !std::all_of(digits.begin(), digits.end(),
                   [](char c) { return c >= '0' && c <= '9'; })) {
    fail(ErrorCode::Syntax, "expected arity digits after '/'", span);
  }
  if (digits.size() > 6) {
    fail(ErrorCode::Syntax, "arity out of range", span);
  }
  int value = 0;
  for (char c : digits) value = value * 10 + (c - '0');
  return value;
}

}  // namespace

Dfta parse_dfta(std::string_view text) {
  auto lines = tokenize_lines(text);
  TokenCursor cur(lines);

  auto expect_keyword = [&](std::string_view kw) {
    if (cur.done()) {
      fail(ErrorCode::Syntax, "expected '" + std::string(kw) + "'",
           cur.end_span());
    }
    const Token& t = cur.next();
    if (t.text != kw) {
      fail(ErrorCode::Syntax,
           "expected '" + std::string(kw) + "', got '" + std::string(t.text) + "'",
           t.span);
    }
  };

  // alphabet: one or more name/arity declarations
  expect_keyword("alphabet:");
  std::vector<RankedSymbol> symbols;
  std::vector<SourceSpan> symbol_spans;
  while (!cur.done() && cur.peek().text != "states:") {
    const Token& t = cur.next();
    std::size_t slash = t.text.find('/');
    if (slash == std::string_view::npos) {
      fail(ErrorCode::Syntax,
           "expected symbol declaration 'name/arity', got '" +
               std::string(t.text) + "'",
           t.span);
    }
    std::string_view name = t.text.substr(0, slash);
    if (!is_identifier(name)) {
      fail(ErrorCode::Syntax,
           "invalid symbol name: '" + std::string(name) + "'", t.span);
    }
    int arity = parse_arity(t.text.substr(slash + 1), t.span);
    for (const RankedSymbol& prev : symbols) {
      if (prev.name == name) {
        fail(ErrorCode::DuplicateSymbol,
             "duplicate symbol: " + std::string(name), t.span);
      }
    }
    symbols.push_back({std::string(name), arity});
    symbol_spans.push_back(t.span);
  }
  if (symbols.empty()) {
    fail(ErrorCode::Syntax, "alphabet section is empty",
         cur.done() ? cur.end_span() : cur.peek().span);
  }
  Alphabet alphabet{std::move(symbols)};

  // states: one or more identifiers
  expect_keyword("states:");
  std::vector<std::string> states;
  std::set<std::string> state_set;
  while (!cur.done() && cur.peek().text != "initial:") {
    const Token& t = cur.next();
    std::string name = expect_identifier(t);
    if (!state_set.insert(name).second) {
      fail(ErrorCode::DuplicateState, "duplicate state: " + name, t.span);
    }
    states.push_back(std::move(name));
  }
  if (states.empty()) {
    fail(ErrorCode::Syntax, "states section is empty",
         cur.done() ? cur.end_span() : cur.peek().span);
  }

  expect_keyword("initial:");
  if (cur.done() || cur.peek().text == "rules:") {
    fail(ErrorCode::Syntax, "expected initial state name",
         cur.done() ? cur.end_span() : cur.peek().span);
  }
  const Token& init_tok = cur.next();
  std::string initial = expect_identifier(init_tok);
  if (std::find(states.begin(), states.end(), initial) == states.end()) {
    fail(ErrorCode::InitialNotAState, "initial state not declared: " + initial,
         init_tok.span);
  }

  // rules: zero or more, one per line: source symbol -> children
  expect_keyword("rules:");
  std::vector<RuleSpec> rules;
  std::vector<std::string> sorted_states = states;
  std::sort(sorted_states.begin(), sorted_states.end());
  std::set<std::pair<std::string, std::string>> seen_lhs;
  auto state_known = [&](const std::string& s) {
    return std::binary_search(sorted_states.begin(), sorted_states.end(), s);
  };
  while (!cur.done()) {
    std::size_t line = cur.line_index();
    const Token& src_tok = cur.next();
    RuleSpec rule;
    rule.source = expect_identifier(src_tok);
    if (!state_known(rule.source)) {
      fail(ErrorCode::UnknownState, "unknown state: " + rule.source,
           src_tok.span);
    }
    if (cur.done() || cur.line_index() != line) {
      fail(ErrorCode::Syntax, "incomplete rule", src_tok.span);
    }
    const Token& sym_tok = cur.next();
    rule.symbol = expect_identifier(sym_tok);
    auto sym = alphabet.find(rule.symbol);
    if (!sym) {
      fail(ErrorCode::UnknownSymbol, "unknown symbol: " + rule.symbol,
           sym_tok.span);
    }
    if (cur.done() || cur.line_index() != line || cur.peek().text != "->") {
      fail(ErrorCode::Syntax, "expected '->' in rule",
           (cur.done() || cur.line_index() != line) ? sym_tok.span
                                                    : cur.peek().span);
    }
    cur.next();  // ->
    while (!cur.done() && cur.line_index() == line) {
      const Token& child_tok = cur.next();
      std::string child = expect_identifier(child_tok);
      if (!state_known(child)) {
        fail(ErrorCode::UnknownState, "unknown state: " + child,
             child_tok.span);
      }
      rule.children.push_back(std::move(child));
    }
    std::size_t arity = static_cast<std::size_t>(alphabet.arity(*sym));
    if (rule.children.size() != arity) {
      fail(ErrorCode::ArityMismatch,
           "arity mismatch: symbol '" + rule.symbol + "' has arity " +
               std::to_string(arity) + " but the rule lists " +
               std::to_string(rule.children.size()) + " children",
           sym_tok.span);
    }
    if (!seen_lhs.emplace(rule.source, rule.symbol).second) {
      fail(ErrorCode::DuplicateLhs,
           "duplicate left-hand side: (" + rule.source + ", " + rule.symbol +
               ")",
           src_tok.span);
    }
    rules.push_back(std::move(rule));
  }

  return Dfta(std::move(alphabet), std::move(states), initial, rules);
}

std::string render_dfta(const Dfta& dfta) {
  std::ostringstream out;
  out << "alphabet:";
  for (const RankedSymbol& s : dfta.alphabet().symbols()) {
    out << ' ' << s.name << '/' << s.arity;
  }
  out << "\nstates:";
  for (const std::string& s : dfta.state_names()) out << ' ' << s;
  out << "\ninitial: " << dfta.state_name(dfta.initial());
  out << "\nrules:\n";
  for (const Rule& r : dfta.rules()) {
    out << "  " << dfta.state_name(r.source) << ' '
        << dfta.alphabet().name(r.symbol) << " ->";
    for (StateId c : r.children) out << ' ' << dfta.state_name(c);
    out << '\n';
  }
  return out.str();
}

namespace {

class TreeParser {
 public:
  TreeParser(std::string_view text, const Alphabet& alphabet)
      : text_(text), alphabet_(alphabet) {}

  Tree parse() {
    skip_ws();
    Tree t = term();
    skip_ws();
    if (pos_ < text_.size()) {
      fail(ErrorCode::Syntax, "unexpected trailing input", span());
    }
    return t;
  }

 private:
  Tree term() {
    SourceSpan start = span();
    std::string name = identifier();
    auto sym = alphabet_.find(name);
    if (!sym) {
      fail(ErrorCode::UnknownSymbol, "unknown symbol: " + name, start);
    }
    std::size_t arity = static_cast<std::size_t>(alphabet_.arity(*sym));
    Tree t{std::move(name), {}};
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == '(') {
      advance();
      skip_ws();
      if (pos_ < text_.size() && text_[pos_] == ')') {
        advance();  // explicit empty child list: a()
      } else {
        t.children.push_back(term());
        skip_ws();
        while (pos_ < text_.size() && text_[pos_] == ',') {
          advance();
          skip_ws();
          t.children.push_back(term());
          skip_ws();
        }
        if (pos_ >= text_.size() || text_[pos_] != ')') {
          fail(ErrorCode::Syntax, "expected ')' or ','", span());
        }
        advance();
      }
    }
    if (t.children.size() != arity) {
      fail(ErrorCode::ArityMismatch,
           "arity mismatch: symbol '" + t.symbol + "' has arity " +
               std::to_string(arity) + " but the term lists " +
               std::to_string(t.children.size()) + " children",
           start);
    }
    return t;
  }

  std::string identifier() {
    check_byte();
    std::size_t start = pos_;
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if ((c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') ||
          (c >= '0' && c <= '9') || c == '_') {
        advance();
      } else {
        break;
      }
    }
    std::string_view name = text_.substr(start, pos_ - start);
    if (!is_identifier(name)) {
      fail(ErrorCode::Syntax, "expected identifier", span());
    }
    return std::string(name);
  }

  void skip_ws() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
      } else {
        check_byte();
        break;
      }
    }
  }

  void check_byte() {
    if (pos_ >= text_.size()) {
      fail(ErrorCode::Syntax, "unexpected end of input", span());
    }
    unsigned char c = static_cast<unsigned char>(text_[pos_]);
    if (c >= 0x80 || (c < 0x20 && c != '\t' && c != '\r' && c != '\n')) {
      fail(ErrorCode::Syntax, "non-ASCII or control byte in input", span());
    }
  }

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  SourceSpan span() const { return {line_, col_}; }

  std::string_view text_;
  const Alphabet& alphabet_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
};

void render_tree_into(const Tree& t, std::string& out) {
  out += t.symbol;
  if (!t.children.empty()) {
    out += '(';
    for (std::size_t i = 0; i < t.children.size(); ++i) {
      if (i > 0) out += ',';
      render_tree_into(t.children[i], out);
    }
    out += ')';
  }
}

}  // namespace

Tree parse_tree(std::string_view text, const Alphabet& alphabet) {
  return TreeParser(text, alphabet).parse();
}

std::string render_tree(const Tree& tree) {
  std::string out;
  render_tree_into(tree, out);
  return out;
}

}  // namespace treq
