//
// Project mpa - message-passing automata over labeled trees
// SPDX-License-Identifier: Apache-2.0
//

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "mpa/automata/run.hpp"
#include "mpa/compiler/compile.hpp"
#include "mpa/gnnf/gnn.hpp"
#include "mpa/harness/check.hpp"
#include "mpa/harness/corpus.hpp"
#include "mpa/harness/fuzz.hpp"
#include "mpa/harness/samples.hpp"
#include "mpa/logic/gml.hpp"
#include "mpa/logic/gmsc.hpp"
#include "mpa/model/enumerate.hpp"
#include "mpa/model/tree_io.hpp"

#ifndef MPA_DEFAULT_CORPUS
#define MPA_DEFAULT_CORPUS "corpus"
#endif

using namespace mpa;
namespace fs = std::filesystem;

namespace {

enum Exit { kOk = 0, kDisagree = 1, kInput = 2, kBudget = 3 };

/// Flags shared by every command.
struct Common {
  std::size_t max_nodes = 6;
  std::size_t max_rounds = 10000;
  std::size_t state_budget = kDefaultStateBudget;
  std::uint64_t seed = 1;
  std::string out;
};

/// Where the automaton under study comes from.
struct Source {
  std::string formula_file;
  std::string gml;
  std::string program_file;
  std::string sample;
  std::string stage = "fixed-point";
  bool from_gml = false;
};

void add_common(CLI::App *cmd, Common &c) {
  cmd->add_option("--max-nodes", c.max_nodes, "Largest tree size")->check(CLI::PositiveNumber);
  cmd->add_option("--max-rounds", c.max_rounds, "Round horizon");
  cmd->add_option("--state-budget", c.state_budget, "Materialized state budget")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--seed", c.seed, "Random seed");
  cmd->add_option("--out", c.out, "Output directory");
}

void add_source(CLI::App *cmd, Source &s, bool with_program) {
  cmd->add_option("--formula", s.formula_file, "MSO formula file, free variable x");
  cmd->add_option("--gml", s.gml, "GML formula text");
  if (with_program) cmd->add_option("--program", s.program_file, "GMSC program file");
  cmd->add_option("--sample", s.sample, "Built-in automaton: a_py, guess_reach, ...");
  cmd->add_option("--stage", s.stage, "fixed-point, omnipresent or final")
      ->check(CLI::IsMember({"fixed-point", "omnipresent", "final"}));
  cmd->add_flag("--from-gml", s.from_gml, "Formula is a translated GML formula");
}

std::ofstream open_out(const Common &c, const std::string &name) {
  fs::create_directories(c.out);
  std::ofstream f(fs::path(c.out) / name);
  if (!f) throw Error("cannot write " + (fs::path(c.out) / name).string());
  return f;
}

/// Writes to `<out>/<name>` when --out is set, to stdout otherwise.
template <typename F>
void emit(const Common &c, const std::string &name, F &&write) {
  if (c.out.empty()) {
    write(std::cout);
  } else {
    auto f = open_out(c, name);
    write(f);
  }
}

CmpaPtr sample_automaton(const std::string &name) {
  if (name == "a_py") return samples::a_py();
  if (name == "guess_reach") return samples::guess_reach();
  if (name == "guess_count") return samples::guess_count();
  if (name == "guess_mix") return samples::guess_mix();
  if (name == "flip_flop") return samples::flip_flop();
  if (name == "det_guess_reach") return determinize(samples::guess_reach());
  if (name == "det_guess_count") return determinize(samples::guess_count());
  if (name == "det_guess_mix") return determinize(samples::guess_mix());
  throw Error("unknown sample '" + name + "'");
}

struct Loaded {
  std::optional<CompilationUnit> unit;
  CmpaPtr automaton;
  std::string id;
};

std::optional<CompilationUnit> unit_from(const Source &s, std::size_t budget) {
  if (!s.formula_file.empty() && !s.gml.empty())
    throw Error("give either --formula or --gml, not both");
  MsoFormula phi;
  if (!s.gml.empty()) {
    phi = gml_to_mso(parse_gml(s.gml));
  } else if (!s.formula_file.empty()) {
    phi = parse_mso(read_file(s.formula_file));
  } else {
    return std::nullopt;
  }
  CompileOptions opts;
  opts.state_budget = budget;
  return compile_mso(phi, opts);
}

void warn_final(const Source &s) {
  if (s.stage != "fixed-point" && s.gml.empty() && !s.from_gml)
    std::cerr << "warning: the " << s.stage
              << " stage is only correct for formulas equivalent to an omega-GML formula\n";
}

Loaded load(const Source &s, std::size_t budget) {
  Loaded l;
  if ((l.unit = unit_from(s, budget))) {
    warn_final(s);
    l.automaton = stage_automaton(*l.unit, parse_stage(s.stage), budget);
    l.id = s.gml.empty() ? s.formula_file : s.gml;
  } else if (!s.program_file.empty()) {
    l.automaton = compile_gmsc(parse_gmsc(read_file(s.program_file)), budget);
    l.id = s.program_file;
  } else if (!s.sample.empty()) {
    l.automaton = sample_automaton(s.sample);
    l.id = s.sample;
  } else {
    throw Error("no automaton given (--formula, --gml, --program or --sample)");
  }
  return l;
}

RootedTree tree_arg(const std::string &text) {
  if (fs::exists(text)) return parse_tree(read_file(text));
  return parse_tree(text);
}

KripkeModel model_for(const Loaded &l, const RootedTree &t) {
  return l.unit ? l.unit->pointed(t.model(), 0) : t.model();
}

int cmd_compile(const Source &s, const Common &c) {
  auto unit = unit_from(s, c.state_budget);
  if (!unit) throw Error("compile needs --formula or --gml");
  warn_final(s);
  auto a = stage_automaton(*unit, parse_stage(s.stage), c.state_budget);
  measure_reachable(*unit);
  write_stats(std::cout, *unit);
  if (!c.out.empty()) {
    auto stats = open_out(c, "stats.tsv");
    write_stats(stats, *unit);
    auto desc = open_out(c, "automaton.json");
    write_description(desc, *a);
  }
  return kOk;
}

int cmd_check(const Source &s, const Common &c, std::size_t random_trees,
              const std::string &alphabet_text, std::size_t oracle_cap, bool inject_swap) {
  auto l = load(s, c.state_budget);
  if (!l.unit) throw Error("check needs --formula or --gml");
  LabelSet alphabet;
  std::stringstream names(alphabet_text);
  for (std::string n; std::getline(names, n, ',');)
    if (!n.empty()) alphabet = alphabet.with(intern_symbol(n));

  std::vector<RootedTree> trees;
  if (random_trees > 0) {
    std::mt19937_64 rng(c.seed);
    for (std::size_t i = 0; i < random_trees; ++i) {
      auto n = std::uniform_int_distribution<std::size_t>(1, c.max_nodes)(rng);
      trees.push_back(random_tree(n, alphabet, rng));
    }
  } else {
    trees = enumerate_trees(c.max_nodes, alphabet);
  }
  std::function<bool(const RootedTree &)> oracle;
  if (!s.gml.empty()) {
    auto g = parse_gml(s.gml);
    oracle = [g](const RootedTree &t) { return gml_eval(t, 0, g); };
  } else {
    MsoOracleOptions oo;
    oo.size_cap = oracle_cap;
    auto phi = l.unit->formula;
    oracle = [phi, oo](const RootedTree &t) { return mso_check_root(t, phi, "x", oo); };
  }
  CheckOptions opts;
  opts.stage = parse_stage(s.stage);
  opts.inject_swap = inject_swap;
  opts.decide.max_rounds = c.max_rounds;
  auto report = check_against_oracle(*l.unit, *l.automaton, l.id, trees, oracle, opts);
  report.write_summary(std::cout);
  if (!c.out.empty()) {
    auto sum = open_out(c, "report.txt");
    report.write_summary(sum);
    auto tsv = open_out(c, "cases.tsv");
    report.write_tsv(tsv);
  }
  return report.ok() ? kOk : kDisagree;
}

int cmd_run(const Source &s, const Common &c, const std::string &tree_text) {
  auto l = load(s, c.state_budget);
  auto t = tree_arg(tree_text);
  RunOptions ro;
  ro.max_rounds = c.max_rounds;
  ro.throw_on_horizon = false;
  auto trace = run(*l.automaton, model_for(l, t), ro);
  emit(c, "trace.tsv", [&](std::ostream &o) { write_trace_tsv(o, *l.automaton, trace); });
  return kOk;
}

int cmd_fuzz(const Common &c, std::size_t cases, const std::string &property,
             const std::string &corpus) {
  FuzzOptions fo;
  fo.seed = c.seed;
  fo.cases = cases;
  fo.max_nodes = c.max_nodes;
  fo.property = property;
  fo.corpus = corpus;
  auto report = fuzz(fo);
  emit(c, "fuzz.tsv", [&](std::ostream &o) { report.write(o); });
  if (!c.out.empty())
    std::cout << "cases\t" << report.cases.size() << "\nfailures\t" << report.failures << '\n';
  return report.failures == 0 ? kOk : kDisagree;
}

int cmd_gmsc(const std::string &program_file, const Common &c, const std::string &tree_text,
             bool check) {
  auto program = parse_gmsc(read_file(program_file));
  if (check) {
    auto a = compile_gmsc(program, c.state_budget);
    std::size_t bad = 0, total = 0;
    for (auto &t : enumerate_trees(c.max_nodes, LabelSet{"p", "q"})) {
      ++total;
      bool direct = gmsc_accepts(t, 0, program);
      bool viaa = decide(*a, t.model(), 0, Acceptance::standard()) == Verdict::Accept;
      if (direct != viaa && bad++ == 0)
        std::cout << "counterexample\t" << serialize_tree(t) << "\tprogram=" << direct
                  << "\tautomaton=" << viaa << '\n';
    }
    std::cout << "cases\t" << total << "\ndisagree\t" << bad << '\n';
    return bad == 0 ? kOk : kDisagree;
  }
  auto t = tree_arg(tree_text);
  auto tr = gmsc_trace(t.model(), program);
  emit(c, "gmsc.tsv", [&](std::ostream &o) {
    o << "round\tnode\ttrue_variables\n";
    for (std::size_t r = 0; r < tr.rounds.size(); ++r)
      for (NodeId v = 0; v < t.size(); ++v) {
        o << r << '\t' << v << '\t';
        bool first = true;
        for (std::size_t i = 0; i < program.size(); ++i)
          if ((tr.rounds[r][v] >> i) & 1U) {
            o << (first ? "" : ",") << program.variables[i];
            first = false;
          }
        o << '\n';
      }
    o << "# accepts_root\t" << (gmsc_accepts(t, 0, program) ? "true" : "false") << '\n';
  });
  return kOk;
}

FVec config_vector(const FloatSystem &sys, const nlohmann::json &j, const std::string &what) {
  FVec out;
  for (auto &x : j) {
    std::string text = x.is_string() ? x.get<std::string>() : x.dump();
    bool exact = true;
    out.push_back(sys.from_decimal(text, &exact));
    if (!exact)
      std::cerr << "warning: " << what << " value " << text << " rounded to "
                << rational_string(sys.decode(out.back())) << '\n';
  }
  return out;
}

/// {"system": {"p","q","beta"}, "bound", "init": {"{p}": [...], ...},
///  "C": [[...]], "A": [[...]], "b": [...], "accept": {"coordinate", "at_least"}}
GnnF rsimple_from_config(const std::string &file) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file(file));
  } catch (const nlohmann::json::parse_error &e) {
    throw SyntaxError(std::string("GNN config: ") + e.what(), 1, e.byte);
  }
  auto sysj = j.at("system");
  auto sys = std::make_shared<const FloatSystem>(sysj.at("p").get<unsigned>(),
                                                 sysj.at("q").get<unsigned>(),
                                                 sysj.at("beta").get<unsigned>());
  RSimpleParams params;
  params.b = config_vector(*sys, j.at("b"), "b");
  for (auto &row : j.at("C")) params.C.push_back(config_vector(*sys, row, "C"));
  for (auto &row : j.at("A")) params.A.push_back(config_vector(*sys, row, "A"));
  const std::size_t d = params.b.size();
  LabelSet signature;
  std::map<std::uint64_t, FVec> init;
  for (auto &[key, value] : j.at("init").items()) {
    LabelSet P;
    std::string inner = key.substr(1, key.size() - 2);
    std::stringstream names(inner);
    for (std::string n; std::getline(names, n, ',');)
      if (!n.empty()) P = P.with(intern_symbol(n));
    signature = signature | P;
    init[P.bits()] = config_vector(*sys, value, "init");
    if (init[P.bits()].size() != d) throw Error("init vector for " + key + " has wrong length");
  }
  auto accept = j.value("accept", nlohmann::json::object());
  std::size_t coord = accept.value("coordinate", 0);
  auto threshold_value = sys->decode(
      accept.contains("at_least") ? config_vector(*sys, std::vector{accept["at_least"]}, "at_least")[0]
                                  : sys->one());
  return make_rsimple(
      sys, signature, j.value("bound", 1),
      [init, sys, d](LabelSet P) {
        auto it = init.find(P.bits());
        return it == init.end() ? FVec(d, sys->zero()) : it->second;
      },
      std::move(params),
      [sys, coord, threshold_value](const FVec &x) {
        return coord < x.size() && sys->decode(x[coord]) >= threshold_value;
      });
}

int cmd_gnn(const Source &s, const Common &c, const std::string &config,
            const std::string &tree_text) {
  auto t = tree_arg(tree_text);
  GnnRunOptions go;
  go.max_rounds = c.max_rounds;
  if (!config.empty()) {
    auto g = rsimple_from_config(config);
    auto tr = gnn_run(g, t.model(), go);
    emit(c, "gnn.tsv", [&](std::ostream &o) {
      write_gnn_trace_tsv(o, *g.system, tr);
      o << "# accepts_root\t" << (gnn_accepts(g, t.model(), 0, go) ? "true" : "false") << '\n';
    });
    return kOk;
  }
  auto l = load(s, c.state_budget);
  auto e = embed_fcmpa(l.automaton, nullptr, c.state_budget);
  auto m = model_for(l, t);
  auto tr = gnn_run(e.gnn, m, go);
  emit(c, "gnn.tsv", [&](std::ostream &o) {
    write_gnn_trace_tsv(o, *e.gnn.system, tr);
    o << "# system\t" << e.gnn.system->describe() << '\n';
    o << "# states";
    for (auto q : e.states) o << '\t' << l.automaton->state_name(q);
    o << '\n';
    o << "# accepts_root\t" << (gnn_accepts(e.gnn, m, 0, go) ? "true" : "false") << '\n';
  });
  return kOk;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"mpa: message-passing automata, MSO compilation and GNN[F] simulation"};
  app.require_subcommand(1);
  Common common;
  Source source;

  auto *compile = app.add_subcommand("compile", "Compile a formula and report stage statistics");
  add_common(compile, common);
  add_source(compile, source, false);

  auto *check = app.add_subcommand("check", "Compare an automaton stage with the oracle");
  add_common(check, common);
  add_source(check, source, false);
  std::size_t random_trees = 0, oracle_cap = 12;
  std::string alphabet = "p,q";
  bool inject_swap = false;
  check->add_option("--random", random_trees, "Check this many random trees instead");
  check->add_option("--alphabet", alphabet, "Comma-separated propositions");
  check->add_option("--oracle-cap", oracle_cap, "Largest tree for set quantifiers");
  check->add_flag("--inject-swap", inject_swap)->group("");

  auto *runc = app.add_subcommand("run", "Write the trace of an automaton on a tree");
  add_common(runc, common);
  add_source(runc, source, true);
  std::string tree_text;
  runc->add_option("--tree", tree_text, "Tree text or file")->required();

  auto *fuzzc = app.add_subcommand("fuzz", "Seeded property checks");
  add_common(fuzzc, common);
  std::size_t cases = 1000;
  std::string property, corpus = MPA_DEFAULT_CORPUS;
  fuzzc->add_option("--cases", cases, "Number of cases");
  fuzzc->add_option("--property", property, "Only this property")
      ->check(CLI::IsMember(fuzz_properties()));
  fuzzc->add_option("--corpus", corpus, "Corpus directory");

  auto *gmscc = app.add_subcommand("gmsc", "Evaluate a GMSC program");
  add_common(gmscc, common);
  std::string program;
  bool gmsc_check = false;
  gmscc->add_option("--program", program, "Program file")->required();
  gmscc->add_option("--tree", tree_text, "Tree text or file");
  gmscc->add_flag("--check", gmsc_check, "Compare with the compiled automaton on all trees");

  auto *gnnc = app.add_subcommand("gnn", "Run a GNN[F]: R-simple from a config or an embedding");
  add_common(gnnc, common);
  add_source(gnnc, source, true);
  std::string config;
  gnnc->add_option("--config", config, "R-simple GNN JSON config");
  gnnc->add_option("--tree", tree_text, "Tree text or file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kInput;
  }

  try {
    if (*compile) return cmd_compile(source, common);
    if (*check) return cmd_check(source, common, random_trees, alphabet, oracle_cap, inject_swap);
    if (*runc) return cmd_run(source, common, tree_text);
    if (*fuzzc) return cmd_fuzz(common, cases, property, corpus);
    if (*gmscc) {
      if (!gmsc_check && tree_text.empty()) throw Error("gmsc needs --tree or --check");
      return cmd_gmsc(program, common, tree_text, gmsc_check);
    }
    if (*gnnc) return cmd_gnn(source, common, config, tree_text);
  } catch (const BudgetExceeded &e) {
    std::cerr << "budget: " << e.what() << '\n';
    return kBudget;
  } catch (const HorizonExceeded &e) {
    std::cerr << "budget: " << e.what() << '\n';
    return kBudget;
  } catch (const GnnHorizonExceeded &e) {
    std::cerr << "budget: " << e.what() << '\n';
    return kBudget;
  } catch (const Undecidable &e) {
    std::cerr << "budget: " << e.what() << '\n';
    return kBudget;
  } catch (const SizeLimit &e) {
    std::cerr << "budget: " << e.what() << '\n';
    return kBudget;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInput;
  }
  return kOk;
}
