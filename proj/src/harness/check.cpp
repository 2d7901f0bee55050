//
// Project mpa - message-passing automata over labeled trees
// SPDX-License-Identifier: Apache-2.0
//

#include "mpa/harness/check.hpp"

#include <exception>
#include <ostream>

#include "mpa/automata/combinators.hpp"
#include "mpa/model/tree_io.hpp"

namespace mpa {

Stage parse_stage(const std::string &text) {
  if (text == "fixed-point") return Stage::FixedPoint;
  if (text == "omnipresent") return Stage::Omnipresent;
  if (text == "final") return Stage::Final;
  throw Error("unknown stage '" + text + "' (fixed-point, omnipresent, final)");
}

std::string to_string(Stage s) {
  switch (s) {
    case Stage::FixedPoint:
      return "fixed-point";
    case Stage::Omnipresent:
      return "omnipresent";
    case Stage::Final:
      return "final";
  }
  return "?";
}

void CheckReport::add(CheckCase c) {
  if (c.verdict == Verdict::Neither) ++neither;
  if (c.agree) {
    ++agree;
  } else {
    ++disagree;
    if (!first_counterexample) first_counterexample = c;
  }
  cases.push_back(std::move(c));
}

void CheckReport::merge(const CheckReport &other) {
  for (auto &c : other.cases) add(c);
}

void CheckReport::write_summary(std::ostream &out) const {
  out << "cases\t" << cases.size() << "\nagree\t" << agree << "\ndisagree\t" << disagree
      << "\nneither\t" << neither << '\n';
  if (first_counterexample) {
    auto &c = *first_counterexample;
    out << "counterexample\t" << c.formula_id << '\t' << c.tree << "\toracle=" << c.oracle
        << "\tautomaton=" << to_string(c.verdict) << '\n';
  }
}

void CheckReport::write_tsv(std::ostream &out) const {
  out << "tree\tformula\toracle\tverdict\trounds\tagree\n";
  for (auto &c : cases)
    out << c.tree << '\t' << c.formula_id << '\t' << (c.oracle ? "true" : "false") << '\t'
        << to_string(c.verdict) << '\t' << c.rounds << '\t' << (c.agree ? "yes" : "no") << '\n';
}

CmpaPtr stage_automaton(CompilationUnit &unit, Stage stage, std::size_t state_budget) {
  if (stage != Stage::FixedPoint && !unit.final_automaton)
    compile_final_stages(unit, state_budget);
  switch (stage) {
    case Stage::FixedPoint:
      return unit.fixed_point;
    case Stage::Omnipresent:
      return unit.omnipresent;
    case Stage::Final:
      return unit.final_automaton;
  }
  return nullptr;
}

CheckReport check_against_oracle(const CompilationUnit &unit, const Cmpa &automaton,
                                 const std::string &formula_id,
                                 const std::vector<RootedTree> &trees,
                                 const std::function<bool(const RootedTree &)> &oracle,
                                 const CheckOptions &opts) {
  CmpaPtr swapped;
  const Cmpa *a = &automaton;
  if (opts.inject_swap) {
    swapped = negate(std::shared_ptr<const Cmpa>(&automaton, [](const Cmpa *) {}));
    a = swapped.get();
  }
  Acceptance cond = opts.stage == Stage::FixedPoint    ? Acceptance::fixed_point()
                    : opts.stage == Stage::Omnipresent ? Acceptance::omnipresent()
                                                       : Acceptance::standard();
  std::vector<CheckCase> cases(trees.size());
  std::exception_ptr failure;
  auto one = [&](std::size_t i) {
    const auto &t = trees[i];
    CheckCase c;
    c.tree = serialize_tree(t);
    c.formula_id = formula_id;
    c.oracle = oracle(t);
    auto m = unit.pointed(t.model(), 0);
    c.verdict = decide(*a, m, 0, cond, opts.decide);
    if (a->deterministic()) {
      RunOptions ro;
      ro.max_rounds = opts.decide.max_rounds;
      c.rounds = run(*a, m, ro).rounds.size();
    }
    if (opts.stage == Stage::FixedPoint)
      c.agree = c.verdict == (c.oracle ? Verdict::Accept : Verdict::Reject);
    else
      c.agree = (c.verdict == Verdict::Accept) == c.oracle;
    cases[i] = std::move(c);
  };
  const auto n = static_cast<std::int64_t>(trees.size());
  if (opts.parallel) {
#pragma omp parallel for schedule(dynamic, 8)
    for (std::int64_t i = 0; i < n; ++i) {
      try {
        one(static_cast<std::size_t>(i));
      } catch (...) {
#pragma omp critical
        if (!failure) failure = std::current_exception();
      }
    }
    if (failure) std::rethrow_exception(failure);
  } else {
    for (std::int64_t i = 0; i < n; ++i) one(static_cast<std::size_t>(i));
  }
  CheckReport report;
  for (auto &c : cases) report.add(std::move(c));
  return report;
}

}  // namespace mpa
