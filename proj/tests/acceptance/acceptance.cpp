//
// Project mpa - message-passing automata over labeled trees
// SPDX-License-Identifier: Apache-2.0
//
// Runs the eight acceptance criteria and prints one PASS/FAIL line for each.
// Expected values come from brute-force oracles, never from the automata.

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <iomanip>
#include <iostream>
#include <mutex>
#include <optional>
#include <set>
#include <sstream>

#include "mpa/automata/combinators.hpp"
#include "mpa/automata/run.hpp"
#include "mpa/compiler/compile.hpp"
#include "mpa/gnnf/floats.hpp"
#include "mpa/gnnf/gnn.hpp"
#include "mpa/harness/check.hpp"
#include "mpa/harness/corpus.hpp"
#include "mpa/harness/samples.hpp"
#include "mpa/logic/extendable.hpp"
#include "mpa/logic/gml.hpp"
#include "mpa/logic/gmsc.hpp"
#include "mpa/logic/mso.hpp"
#include "mpa/model/enumerate.hpp"
#include "mpa/model/tree_io.hpp"

using namespace mpa;
namespace fs = std::filesystem;

namespace {

/// Collects failures for one criterion; only the first few are printed.
struct Outcome {
  std::size_t checked = 0;
  std::size_t failures = 0;
  std::vector<std::string> notes;
  std::mutex mu;

  void fail(const std::string &why) {
    std::lock_guard lock(mu);
    ++failures;
    if (notes.size() < 5) notes.push_back(why);
  }
  void expect(bool ok, const std::string &why) {
    {
      std::lock_guard lock(mu);
      ++checked;
    }
    if (!ok) fail(why);
  }
};

const LabelSet kPQ{"p", "q"};

std::vector<std::size_t> heights(const KripkeModel &m) {
  std::vector<std::size_t> h(m.size(), 0);
  // Children carry larger ids than their parents in enumerated trees, but do
  // not rely on it: iterate until nothing changes.
  for (bool changed = true; changed;) {
    changed = false;
    for (NodeId v = 0; v < m.size(); ++v)
      for (auto w : m.successors[v])
        if (h[w] + 1 > h[v]) h[v] = h[w] + 1, changed = true;
  }
  return h;
}

template <typename F>
void parallel_for(std::size_t n, F &&body) {
  std::exception_ptr failure;
  std::mutex mu;
#pragma omp parallel for schedule(dynamic, 16)
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(n); ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
      std::lock_guard lock(mu);
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
}

// 1. Stage-1 fixed-point verdicts against the MSO oracle.
void fixed_point_soundness(const fs::path &corpus, Outcome &out) {
  auto formulas = load_mso_corpus(corpus / "mso");
  bool so = false, neg_exists = false, edge = false, equality = false;
  for (auto &[name, phi] : formulas) {
    auto text = to_string(phi);
    so = so || has_so_quantifier(phi);
    neg_exists = neg_exists || text.find("!(exists") != std::string::npos ||
                 text.find("!exists") != std::string::npos;
    edge = edge || text.find("E(") != std::string::npos;
    equality = equality || text.find(" = ") != std::string::npos;
    out.expect(quantifier_depth(phi) <= 2, name + ": more than two nested quantifiers");
  }
  out.expect(formulas.size() >= 10, "corpus has fewer than 10 formulas");
  out.expect(so && neg_exists && edge && equality,
             "corpus lacks one of: exists Y, !exists y, E(y,z), y = z");

  auto trees = enumerate_trees(6, kPQ);
  for (auto &[name, phi] : formulas) {
    auto unit = compile_mso(phi);
    auto f = phi;
    auto report = check_against_oracle(
        unit, *unit.fixed_point, name, trees,
        [f](const RootedTree &t) { return mso_check_root(t, f, "x"); });
    out.checked += report.cases.size();
    if (report.neither) out.fail(name + ": " + std::to_string(report.neither) + " Neither");
    if (report.disagree)
      out.fail(name + ": " + std::to_string(report.disagree) + " disagreements, first " +
               report.first_counterexample->tree);
  }
}

// 2. The properness automaton sees exactly the label counts of the i-prefix.
void properness_counts(Outcome &out) {
  std::vector<std::vector<Symbol>> var_sets = {{fo_symbol("x")}, {fo_symbol("x"), fo_symbol("y")}};
  for (auto &vars : var_sets) {
    auto a = properness(vars);
    LabelSet alphabet;
    for (auto s : vars) alphabet = alphabet.with(s);
    auto trees = enumerate_trees(6, alphabet);
    parallel_for(trees.size(), [&](std::size_t i) {
      const auto &t = trees[i];
      const auto &m = t.model();
      auto tr = run(*a, m);
      const auto horizon = t.depth() + 2;
      for (NodeId v = 0; v < m.size(); ++v) {
        // Nodes of v's subtree by distance from v.
        std::vector<std::vector<NodeId>> layers{{v}};
        while (!layers.back().empty()) {
          std::vector<NodeId> next;
          for (auto u : layers.back())
            for (auto w : m.successors[u]) next.push_back(w);
          layers.push_back(std::move(next));
        }
        std::vector<std::size_t> count(vars.size(), 0);
        for (std::size_t r = 0; r <= horizon; ++r) {
          if (r < layers.size())
            for (auto u : layers[r])
              for (std::size_t j = 0; j < vars.size(); ++j)
                if (m.labels[u].contains(vars[j])) ++count[j];
          bool singleton = true, overfull = false;
          for (auto c : count) singleton = singleton && c == 1, overfull = overfull || c >= 2;
          auto q = tr.at(r, v);
          std::string where = serialize_tree(t) + " node " + std::to_string(v) + " round " +
                              std::to_string(r);
          out.expect(a->accepting(q) == singleton, "accept mismatch " + where);
          out.expect(a->rejecting(q) == overfull, "reject mismatch " + where);
        }
      }
    });
  }
}

// 3. Power-set determinization of hand-built nondeterministic automata.
void determinization_samples(Outcome &out) {
  auto trees = enumerate_trees(5, LabelSet{"p"});
  std::vector<KripkeModel> models;
  for (auto &t : trees) models.push_back(t.model());
  for (auto &a : {samples::guess_reach(), samples::guess_count(), samples::guess_mix()}) {
    auto d = determinize(a);
    auto &pd = dynamic_cast<const PowersetCmpa &>(*d);
    const auto k = a->bound().value, states = a->materialized_states();
    out.expect(states <= 4, a->kind() + ": more than four states");
    out.expect(d->bound().value == k * states, a->kind() + ": bound is not k|Q|");
    parallel_for(trees.size(), [&](std::size_t i) {
      const auto &t = trees[i];
      std::string why;
      out.expect(samples::run_sets_equal(*a, pd, t.model(), t.depth() + 3, &why),
                 a->kind() + " run sets on " + serialize_tree(t) + ": " + why);
      for (auto c : {Acceptance::standard(), Acceptance::fixed_point()})
        out.expect(decide(*a, t.model(), 0, c) == decide(*d, t.model(), 0, c),
                   a->kind() + " verdict on " + serialize_tree(t));
    });
    auto qa = check_quasi_acyclic(*a, models);
    auto qd = check_quasi_acyclic(*d, models);
    out.expect(qa.pass, a->kind() + " is not quasi-acyclic: " + qa.counterexample);
    out.expect(qd.pass, a->kind() + " determinized is not quasi-acyclic: " + qd.counterexample);
  }
}

// 4. Final deterministic automaton and the omnipresent stage.
void full_pipeline(Outcome &out) {
  auto trees6 = enumerate_trees(6, kPQ);
  for (auto text : {"p", "dia>=1 p", "dia>=2 p", "dia>=1 (p & dia>=1 q)", "!dia>=1 p"}) {
    auto g = parse_gml(text);
    auto u = compile_mso(gml_to_mso(g), {.stages = 3});
    parallel_for(trees6.size(), [&](std::size_t i) {
      const auto &t = trees6[i];
      auto m = u.pointed(t.model(), 0);
      bool truth = gml_eval(t, 0, g);
      auto v = decide(*u.final_automaton, m, 0, Acceptance::standard());
      out.expect((v == Verdict::Accept) == truth,
                 std::string(text) + " final on " + serialize_tree(t));
      if (truth && t.size() <= 5)
        out.expect(decide(*u.omnipresent, m, 0, Acceptance::omnipresent()) == Verdict::Accept,
                   std::string(text) + " omnipresent on " + serialize_tree(t));
    });
  }
}

// 5. Satisfied GML formulas stay satisfied on every k-extension.
void k_extendability(const fs::path &corpus, Outcome &out) {
  auto trees = enumerate_trees(5, kPQ);
  ExtendabilityOptions opts;
  opts.alphabet = kPQ;
  opts.caps = {2, 2};
  for (auto &[name, f] : load_gml_corpus(corpus / "gml.txt")) {
    auto k = modal_depth(f);
    auto m = gml_to_mso(f);
    parallel_for(trees.size(), [&](std::size_t i) {
      if (!gml_eval(trees[i], 0, f)) return;
      auto r = k_extendable_check_gml(trees[i], f, k, opts, &m);
      out.expect(r.holds, name + " on " + serialize_tree(trees[i]) + " fails on " +
                              (r.counterexample ? serialize_tree(*r.counterexample) : ""));
    });
  }
}

// 6. GMSC semantics against the compiled automaton.
void gmsc_engine(const fs::path &corpus, Outcome &out) {
  auto programs = load_gmsc_corpus(corpus / "gmsc");
  out.expect(programs.size() >= 5, "fewer than five GMSC programs");
  bool propagation = false;
  for (auto &[name, prog] : programs) propagation = propagation || name == "reach_p";
  out.expect(propagation, "no propagation program reach_p");
  auto trees = enumerate_trees(5, kPQ);
  for (auto &[name, prog] : programs) {
    auto a = compile_gmsc(prog);
    parallel_for(trees.size(), [&](std::size_t i) {
      const auto &t = trees[i];
      for (NodeId v = 0; v < t.size(); ++v)
        out.expect(gmsc_accepts(t, v, prog) ==
                       (decide(*a, t.model(), v, Acceptance::standard()) == Verdict::Accept),
                   name + " on " + serialize_tree(t) + " node " + std::to_string(v));
    });
  }
}

// 7. The float system sys(2,1,2) and the automaton embedding.
void gnn_layer(const fs::path &corpus, Outcome &out) {
  FloatSystem s(2, 1, 2);
  // Every encoding: sign, two base-2 digits, exponent sign, one digit.
  std::vector<FloatNum> encodings;
  std::set<Rational> values;
  for (int neg = 0; neg < 2; ++neg)
    for (unsigned d1 = 0; d1 < 2; ++d1)
      for (unsigned d2 = 0; d2 < 2; ++d2)
        for (int eneg = 0; eneg < 2; ++eneg)
          for (unsigned e = 0; e < 2; ++e) {
            encodings.push_back(FloatNum{neg == 1, {d1, d2}, eneg == 1, {e}});
            Rational mant = Rational(d1, 2) + Rational(d2, 4);
            Rational scale = e == 0 ? Rational(1) : eneg ? Rational(1, 2) : Rational(2);
            values.insert((neg ? -mant : mant) * scale);
          }
  out.expect(std::vector<Rational>(values.begin(), values.end()) == s.values(),
             "value set differs from the enumerated encodings");
  const Rational mx = *values.rbegin();
  auto brute_nearest = [&](const Rational &r) {
    Rational best = *values.begin();
    for (auto &v : values) {
      Rational dv = abs(v - r), db = abs(best - r);
      if (dv < db || (dv == db && abs(v) > abs(best))) best = v;
    }
    return best;
  };
  for (auto &x : encodings) {
    auto vx = s.decode(x);
    auto n = s.nearest(vx);
    out.expect(s.decode(n) == vx, "nearest moves a member " + s.to_string(x));
    out.expect(s.nearest(s.decode(n)) == n, "nearest not idempotent at " + s.to_string(x));
    Rational clipped = vx < 0 ? Rational(0) : vx > 1 ? Rational(1) : vx;
    out.expect(s.decode(s.relu_star(x)) == clipped, "relu_star at " + s.to_string(x));
    for (auto &y : encodings) {
      auto vy = s.decode(y);
      out.expect(s.fsum(x, y) == s.fsum(y, x), "fsum not commutative");
      out.expect(s.decode(s.fsum(x, y)) == brute_nearest(vx + vy),
                 "fsum " + s.to_string(x) + " + " + s.to_string(y));
    }
  }
  auto top = s.nearest(mx), bottom = s.nearest(-mx);
  out.expect(s.decode(s.fsum(top, top)) == mx, "sum does not saturate at max");
  out.expect(s.decode(s.fsum(bottom, bottom)) == -mx, "sum does not saturate at -max");
  out.expect(s.decode(s.fmul(top, s.nearest(mx * 2))) == mx, "product does not saturate");

  // Embedded automata reproduce their traces round by round. Compiled
  // automata run on {p,q}-trees pointed at the root, as everywhere else.
  struct Embedded {
    std::string name;
    CmpaPtr automaton;
    std::optional<CompilationUnit> unit;
  };
  std::vector<Embedded> automata = {{"A_Py", samples::a_py(), std::nullopt},
                                    {"guess_reach", determinize(samples::guess_reach()), std::nullopt},
                                    {"guess_count", determinize(samples::guess_count()), std::nullopt},
                                    {"guess_mix", determinize(samples::guess_mix()), std::nullopt}};
  for (auto &[name, g] : load_gml_corpus(corpus / "gml.txt")) {
    auto u = compile_mso(gml_to_mso(g), {.stages = 3});
    automata.push_back({name, u.final_automaton, std::move(u)});
  }
  for (auto &[name, a, unit] : automata) {
    auto e = embed_fcmpa(a);
    auto trees = enumerate_trees(5, unit ? kPQ : a->signature());
    parallel_for(trees.size(), [&](std::size_t i) {
      auto m = unit ? unit->pointed(trees[i].model(), 0) : trees[i].model();
      auto ta = run(*a, m);
      auto tg = gnn_run(e.gnn, m);
      const auto horizon = std::max(ta.rounds.size(), tg.rounds.size()) + 2;
      bool same = true;
      for (std::size_t r = 0; r < horizon && same; ++r)
        for (NodeId v = 0; v < m.size(); ++v) same = same && e.decode(tg.at(r, v)) == ta.at(r, v);
      out.expect(same, name + " trace on " + serialize_tree(trees[i]));
    });
  }
}

// 8. Stage-1 automata settle a node of height h by round h+1.
void stabilization(const fs::path &corpus, Outcome &out) {
  auto trees = enumerate_trees(6, kPQ);
  for (auto &[name, phi] : load_mso_corpus(corpus / "mso")) {
    auto unit = compile_mso(phi);
    const auto &a = *unit.fixed_point;
    parallel_for(trees.size(), [&](std::size_t i) {
      auto m = unit.pointed(trees[i].model(), 0);
      auto tr = run(a, m);
      auto h = heights(m);
      bool ok = true;
      for (NodeId v = 0; v < m.size() && ok; ++v)
        for (std::size_t t = h[v] + 1; t < tr.rounds.size() + 2 && ok; ++t)
          ok = tr.at(t, v) == tr.at(h[v] + 1, v);
      out.expect(ok, name + " on " + serialize_tree(trees[i]));
    });
  }
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Acceptance criteria"};
  std::string corpus = MPA_CORPUS_DIR;
  std::vector<int> only;
  app.add_option("--corpus", corpus, "Corpus directory");
  app.add_option("--only", only, "Run just these criteria");
  CLI11_PARSE(app, argc, argv);

  struct Criterion {
    int id;
    const char *name;
    std::function<void(Outcome &)> body;
  };
  const fs::path dir = corpus;
  std::vector<Criterion> criteria = {
      {1, "fixed-point soundness and completeness", [&](Outcome &o) { fixed_point_soundness(dir, o); }},
      {2, "properness", [](Outcome &o) { properness_counts(o); }},
      {3, "determinization", [](Outcome &o) { determinization_samples(o); }},
      {4, "full pipeline", [](Outcome &o) { full_pipeline(o); }},
      {5, "k-extendability", [&](Outcome &o) { k_extendability(dir, o); }},
      {6, "GMSC engine", [&](Outcome &o) { gmsc_engine(dir, o); }},
      {7, "GNN[F] layer", [&](Outcome &o) { gnn_layer(dir, o); }},
      {8, "stabilization", [&](Outcome &o) { stabilization(dir, o); }},
  };
  int failed = 0;
  for (auto &c : criteria) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
    Outcome o;
    auto t0 = std::chrono::steady_clock::now();
    try {
      c.body(o);
    } catch (const std::exception &e) {
      o.fail(std::string("exception: ") + e.what());
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool pass = o.failures == 0;
    failed += !pass;
    std::cout << (pass ? "PASS" : "FAIL") << "  criterion " << c.id << ": " << c.name << " ("
              << o.checked << " checks, " << o.failures << " failures, " << std::fixed
              << std::setprecision(1) << secs << " s)\n";
    for (auto &n : o.notes) std::cout << "      " << n << '\n';
    std::cout.flush();
  }
  return failed == 0 ? 0 : 1;
}
