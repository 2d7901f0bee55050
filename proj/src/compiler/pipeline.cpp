//
// Project mpa - message-passing automata over labeled trees
// SPDX-License-Identifier: Apache-2.0
//

#include <algorithm>
#include <chrono>
#include <deque>
#include <iomanip>
#include <set>
#include <unordered_set>

#include "mpa/automata/combinators.hpp"
#include "mpa/automata/minimize.hpp"
#include "mpa/compiler/compile.hpp"

namespace mpa {

const std::vector<StateId> &FixedPointSets::at(LabelSet P) const {
  auto it = per_label.find(P.bits());
  if (it == per_label.end()) throw Error("no fixed-point set for label " + P.to_string());
  return it->second;
}

FixedPointSets fixed_point_sets(const Cmpa &a, std::optional<Symbol> point) {
  if (!a.deterministic() || !a.forgetful())
    throw Error("fixed_point_sets needs a deterministic forgetful automaton");
  LabelSet base = a.signature();
  if (point) base = base.without(*point);
  auto labels = base.subsets();

  std::vector<std::set<StateId>> sets(labels.size());
  std::vector<StateId> states;  // union of all sets, in discovery order
  std::unordered_set<StateId> state_seen;
  std::vector<AggId> aggs;
  std::unordered_set<AggId> agg_seen;
  std::deque<AggId> todo;

  auto reach = [&](AggId g) {
    if (agg_seen.insert(g).second) {
      aggs.push_back(g);
      todo.push_back(g);
    }
  };
  reach(a.agg_empty());
  // Every pair (aggregate, state) gets extended once both are known: when
  // the aggregate is popped for states found earlier, and when the state is
  // found for aggregates reached earlier.
  while (!todo.empty()) {
    AggId g = todo.front();
    todo.pop_front();
    for (std::size_t i = 0; i < labels.size(); ++i) {
      StateId q = a.apply(labels[i], 0, g);
      sets[i].insert(q);
      if (state_seen.insert(q).second) {
        states.push_back(q);
        for (std::size_t j = 0; j < aggs.size(); ++j) reach(a.agg_add(aggs[j], q));
      }
    }
    for (std::size_t j = 0; j < states.size(); ++j) reach(a.agg_add(g, states[j]));
  }

  FixedPointSets out;
  out.aggregates = aggs.size();
  for (std::size_t i = 0; i < labels.size(); ++i) {
    out.per_label[labels[i].bits()] = {sets[i].begin(), sets[i].end()};
    if (point) {
      std::set<StateId> pointed;
      LabelSet P = labels[i].with(*point);
      for (auto g : aggs) pointed.insert(a.apply(P, 0, g));
      out.per_label[P.bits()] = {pointed.begin(), pointed.end()};
    }
  }
  return out;
}

namespace {

class ReinitCmpa final : public Cmpa {
 public:
  ReinitCmpa(CmpaPtr inner, FixedPointSets sets)
      : Cmpa(inner->signature(), false, inner->forgetful(), inner->bound(),
             inner->formal_states()),
        inner_(std::move(inner)),
        sets_(std::move(sets)) {
    for (auto &[bits, qs] : sets_.per_label)
      if (qs.empty()) throw Error("empty fixed-point set for label " + LabelSet(bits).to_string());
  }

  std::vector<StateId> init(LabelSet P) const override { return sets_.at(P & signature_); }
  AggId agg_empty() const override { return inner_->agg_empty(); }
  AggId agg_add(AggId g, StateId q) const override { return inner_->agg_add(g, q); }
  StateId apply(LabelSet P, StateId self, AggId g) const override {
    return inner_->apply(P, self, g);
  }
  bool accepting(StateId q) const override { return inner_->accepting(q); }
  bool rejecting(StateId) const override { return false; }
  std::string state_name(StateId q) const override { return inner_->state_name(q); }
  std::size_t materialized_states() const override { return inner_->materialized_states(); }
  std::string kind() const override { return "reinit"; }

 private:
  CmpaPtr inner_;
  FixedPointSets sets_;
};

StageStats stats_of(const std::string &stage, const Cmpa &a, double seconds) {
  StageStats st{stage, 0, std::nullopt, false, a.formal_states(), a.bound(), seconds};
  st.materialized_states = a.materialized_states();
  return st;
}

double since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

CmpaPtr to_omnipresent_nondet(const CmpaPtr &a, FixedPointSets sets) {
  return std::make_shared<const ReinitCmpa>(a, std::move(sets));
}

CmpaPtr finalize(const CmpaPtr &nondet, std::size_t state_budget) {
  return determinize(nondet, PowersetMode::Omnipresent, state_budget);
}

KripkeModel CompilationUnit::pointed(const KripkeModel &m, NodeId root) const {
  KripkeModel out = m;
  if (point) out.labels.at(root) = out.labels.at(root).with(*point);
  return out;
}

CompilationUnit compile_mso(const MsoFormula &phi, const CompileOptions &opts) {
  CompilationUnit unit;
  unit.formula = phi;
  auto fv = free_vars(phi);
  for (auto &v : fv.first_order) {
    unit.variable_symbols = unit.variable_symbols.with(fo_symbol(v));
    if (v == opts.point) unit.point = fo_symbol(v);
  }
  for (auto &v : fv.second_order) unit.variable_symbols = unit.variable_symbols.with(so_symbol(v));
  for (auto &p : propositions(phi)) unit.signature = unit.signature.with(intern_symbol(p));

  auto t0 = std::chrono::steady_clock::now();
  unit.fixed_point = compile_formula(phi, opts.state_budget);
  unit.stats.push_back(stats_of("fixed-point", *unit.fixed_point, since(t0)));
  if (opts.stages >= 2) compile_final_stages(unit, opts.state_budget, opts.reduce_final);
  return unit;
}

void compile_final_stages(CompilationUnit &unit, std::size_t state_budget, bool reduce) {
  LabelSet others = unit.variable_symbols;
  if (unit.point) others = others.without(*unit.point);
  if (!others.empty())
    throw Error("the omnipresent stage needs a formula whose only free variable is the point");
  auto t0 = std::chrono::steady_clock::now();
  if (reduce) {
    unit.reduced = compile_formula(unit.formula, state_budget, true);
    unit.stats.push_back(stats_of("minimized", *unit.reduced, since(t0)));
    t0 = std::chrono::steady_clock::now();
  } else {
    unit.reduced = unit.fixed_point;
  }
  unit.sets = fixed_point_sets(*unit.reduced, unit.point);
  unit.omnipresent = to_omnipresent_nondet(unit.reduced, *unit.sets);
  unit.stats.push_back(stats_of("omnipresent", *unit.omnipresent, since(t0)));
  t0 = std::chrono::steady_clock::now();
  unit.final_automaton = finalize(unit.omnipresent, state_budget);
  unit.stats.push_back(stats_of("final", *unit.final_automaton, since(t0)));
}

void measure_reachable(CompilationUnit &unit) {
  for (auto &st : unit.stats) {
    const Cmpa *a = nullptr;
    if (st.stage == "fixed-point") a = unit.fixed_point.get();
    else if (st.stage == "minimized") a = unit.reduced.get();
    else if (st.stage == "final") a = unit.final_automaton.get();
    if (!a || !a->deterministic()) continue;
    try {
      st.reachable_states = explore(*a, kStatsExploreCap, kStatsExploreCap * 5).states.size();
    } catch (const StateBudgetExceeded &) {
      st.reachable_truncated = true;
    }
    st.materialized_states = a->materialized_states();
  }
}

void write_stats(std::ostream &out, const CompilationUnit &unit) {
  out << "formula\t" << to_string(unit.formula) << '\n';
  out << "stage\treachable\tmaterialized\tformal_states\tbound\tseconds\n";
  for (auto &s : unit.stats)
    out << s.stage << '\t'
        << (s.reachable_states      ? std::to_string(*s.reachable_states)
            : s.reachable_truncated ? std::string("?")
                                    : std::string("-"))
        << '\t' << s.materialized_states << '\t' << s.formal_states.to_string() << '\t'
        << s.bound.to_string() << '\t' << std::fixed << std::setprecision(3) << s.seconds
        << '\n';
  if (unit.sets) out << "fixed_point_aggregates\t" << unit.sets->aggregates << '\n';
}

}  // namespace mpa
