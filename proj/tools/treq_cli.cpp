// treq: emptiness, membership and state-equivalence for top-down
// deterministic finite tree automata.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "treq/emptiness.hpp"
#include "treq/equivalence.hpp"
#include "treq/errors.hpp"
#include "treq/oracle.hpp"
#include "treq/text_format.hpp"

namespace {

constexpr int kExitYes = 0;    // equivalent / non-empty / accepted
constexpr int kExitNo = 1;     // negative verdict
constexpr int kExitError = 2;  // usage or input error

std::string read_input(const std::string& path) {
  if (path == "-") {
    std::ostringstream buf;
    buf << std::cin.rdbuf();
    return buf.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot open file: " + path);
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

treq::Dfta load_dfta(const std::string& path) {
  try {
    return treq::parse_dfta(read_input(path));
  } catch (const treq::ParseError& e) {
    std::cerr << "treq: " << path << ':' << e.span().line << ':'
              << e.span().column << ": error: " << e.what() << '\n';
    std::exit(kExitError);
  }
}

treq::StateId resolve_state(const treq::Dfta& dfta, const std::string& name) {
  auto q = dfta.find_state(name);
  if (!q) {
    std::cerr << "treq: error: unknown state: " << name << '\n';
    std::exit(kExitError);
  }
  return *q;
}

// `file:state` argument of the cross-automaton form; the split is at the
// rightmost colon so paths with colons still work.
struct FileState {
  std::string file;
  std::string state;
};

std::optional<FileState> split_file_state(const std::string& arg) {
  std::size_t colon = arg.rfind(':');
  if (colon == std::string::npos || colon == 0 || colon + 1 == arg.size()) {
    return std::nullopt;
  }
  return FileState{arg.substr(0, colon), arg.substr(colon + 1)};
}

// Disjoint union of two automata for the cross-automaton convenience form:
// states get the prefixes "A_" / "B_". The prefixes have equal length and
// distinct first characters, so renamed states never collide across the
// two groups. Symbols shared by name must agree on arity.
treq::Dfta disjoint_union(const treq::Dfta& a, const treq::Dfta& b) {
  std::vector<treq::RankedSymbol> symbols(a.alphabet().symbols().begin(),
                                          a.alphabet().symbols().end());
  for (const treq::RankedSymbol& s : b.alphabet().symbols()) {
    auto known = a.alphabet().find(s.name);
    if (known) {
      if (a.alphabet().arity(*known) != s.arity) {
        std::cerr << "treq: error: symbol '" << s.name
                  << "' has different arities in the two automata\n";
        std::exit(kExitError);
      }
    } else {
      symbols.push_back(s);
    }
  }

  std::vector<std::string> states;
  std::vector<treq::RuleSpec> specs;
  auto add = [&](const treq::Dfta& d, const char* prefix) {
    for (const std::string& s : d.state_names()) states.push_back(prefix + s);
    for (const treq::Rule& r : d.rules()) {
      treq::RuleSpec spec;
      spec.source = prefix + d.state_name(r.source);
      spec.symbol = d.alphabet().name(r.symbol);
      for (treq::StateId c : r.children) {
        spec.children.push_back(prefix + d.state_name(c));
      }
      specs.push_back(std::move(spec));
    }
  };
  add(a, "A_");
  add(b, "B_");

  return treq::Dfta(treq::Alphabet{std::move(symbols)}, std::move(states),
                    "A_" + a.state_name(a.initial()), specs);
}

int run(int argc, char** argv) {
  CLI::App app{"emptiness and equivalence checking for top-down DFTAs"};
  app.require_subcommand(1);

  // check-equiv
  auto* equiv = app.add_subcommand(
      "check-equiv", "decide whether two states accept the same language");
  std::vector<std::string> equiv_args;
  bool print_witness = false;
  equiv->add_option("args", equiv_args,
                    "FILE STATE_A STATE_B, or FILE1:STATE1 FILE2:STATE2")
      ->expected(2, 3);
  equiv->add_flag("--witness", print_witness,
                  "print a distinguishing tree on non-equivalence");

  // check-empty
  auto* empty = app.add_subcommand(
      "check-empty", "decide which states accept no tree at all");
  std::string empty_file;
  std::string empty_state;
  empty->add_option("file", empty_file, "automaton file")->required();
  empty->add_option("state", empty_state, "state to test (default: all)");

  // member
  auto* member = app.add_subcommand(
      "member", "test whether a term is accepted from a state");
  std::string member_file;
  std::string member_state;
  std::string member_term;
  member->add_option("file", member_file, "automaton file")->required();
  member->add_option("state", member_state, "start state")->required();
  member->add_option("term", member_term, "term, e.g. f(a,b)")->required();

  // trim
  auto* trim_cmd = app.add_subcommand(
      "trim", "remove rules whose children include empty-language states");
  std::string trim_file;
  trim_cmd->add_option("file", trim_file, "automaton file")->required();

  // gen
  auto* gen = app.add_subcommand("gen", "generate a seeded random automaton");
  std::uint32_t gen_states = 8;
  std::string gen_arities = "0,0,1,2";
  std::string gen_rules = "1..3";
  std::uint64_t gen_seed = 1;
  gen->add_option("--states", gen_states, "number of states");
  gen->add_option("--arities", gen_arities,
                  "comma-separated symbol arities, e.g. 0,0,1,2");
  gen->add_option("--rules", gen_rules, "rules per state, e.g. 1..3");
  gen->add_option("--seed", gen_seed, "generator seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {  // --help
      std::exit(app.exit(e));
    }
    std::cerr << "treq: error: " << e.what() << '\n';
    return kExitError;
  }

  if (equiv->parsed()) {
    std::string name_a;
    std::string name_b;
    std::optional<treq::Dfta> dfta;
    if (equiv_args.size() == 3) {
      dfta = load_dfta(equiv_args[0]);
      name_a = equiv_args[1];
      name_b = equiv_args[2];
    } else {
      auto fs1 = split_file_state(equiv_args[0]);
      auto fs2 = split_file_state(equiv_args[1]);
      if (!fs1 || !fs2) {
        std::cerr << "treq: error: expected FILE STATE_A STATE_B or "
                     "FILE1:STATE1 FILE2:STATE2\n";
        return kExitError;
      }
      treq::Dfta left = load_dfta(fs1->file);
      treq::Dfta right = load_dfta(fs2->file);
      resolve_state(left, fs1->state);
      resolve_state(right, fs2->state);
      dfta = disjoint_union(left, right);
      name_a = "A_" + fs1->state;
      name_b = "B_" + fs2->state;
    }
    treq::StateId a = resolve_state(*dfta, name_a);
    treq::StateId b = resolve_state(*dfta, name_b);
    treq::Verdict verdict = treq::check_equivalence(*dfta, a, b);
    if (verdict.equivalent) {
      std::cout << "equivalent\n";
      return kExitYes;
    }
    std::cout << "not-equivalent\n";
    if (print_witness) {
      std::cout << treq::render_tree(*verdict.witness) << '\n';
    }
    return kExitNo;
  }

  if (empty->parsed()) {
    treq::Dfta dfta = load_dfta(empty_file);
    treq::NonEmptyResult result = treq::nonempty_states(dfta);
    if (empty_state.empty()) {
      for (treq::StateId q = 0; q < dfta.state_count(); ++q) {
        std::cout << dfta.state_name(q) << '\t'
                  << (result.contains(q) ? "non-empty" : "empty") << '\n';
      }
      return kExitYes;
    }
    treq::StateId q = resolve_state(dfta, empty_state);
    if (!result.contains(q)) {
      std::cout << "empty\n";
      return kExitNo;
    }
    std::cout << "non-empty\n"
              << treq::render_tree(result.witness(q)) << '\n';
    return kExitYes;
  }

  if (member->parsed()) {
    treq::Dfta dfta = load_dfta(member_file);
    treq::StateId q = resolve_state(dfta, member_state);
    try {
      treq::Tree term = treq::parse_tree(member_term, dfta.alphabet());
      if (dfta.accepts(q, term)) {
        std::cout << "accepted\n";
        return kExitYes;
      }
      std::cout << "rejected\n";
      return kExitNo;
    } catch (const treq::ParseError& e) {
      std::cerr << "treq: <term>:" << e.span().line << ':' << e.span().column
                << ": error: " << e.what() << '\n';
      return kExitError;
    }
  }

  if (trim_cmd->parsed()) {
    treq::Dfta dfta = load_dfta(trim_file);
    std::cout << treq::render_dfta(treq::trim(dfta).base);
    return kExitYes;
  }

  if (gen->parsed()) {
    treq::GenConfig cfg;
    cfg.state_count = gen_states;
    cfg.seed = gen_seed;
    cfg.symbol_arities.clear();
    std::stringstream arities(gen_arities);
    std::string part;
    while (std::getline(arities, part, ',')) {
      try {
        cfg.symbol_arities.push_back(std::stoi(part));
      } catch (const std::exception&) {
        std::cerr << "treq: error: bad --arities entry: " << part << '\n';
        return kExitError;
      }
    }
    std::size_t dots = gen_rules.find("..");
    try {
      if (dots == std::string::npos) {
        cfg.rules_min = cfg.rules_max =
            static_cast<std::uint32_t>(std::stoul(gen_rules));
      } else {
        cfg.rules_min =
            static_cast<std::uint32_t>(std::stoul(gen_rules.substr(0, dots)));
        cfg.rules_max = static_cast<std::uint32_t>(
            std::stoul(gen_rules.substr(dots + 2)));
      }
      std::cout << treq::render_dfta(treq::random_dfta(cfg));
    } catch (const std::exception& e) {
      std::cerr << "treq: error: " << e.what() << '\n';
      return kExitError;
    }
    return kExitYes;
  }

  return kExitError;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const treq::ParseError& e) {
    std::cerr << "treq: " << e.span().line << ':' << e.span().column
              << ": error: " << e.what() << '\n';
    return kExitError;
  } catch (const treq::ValidationError& e) {
    std::cerr << "treq: error: " << e.what() << '\n';
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "treq: error: " << e.what() << '\n';
    return kExitError;
  }
}
