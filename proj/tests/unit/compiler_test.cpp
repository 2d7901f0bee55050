#include <gtest/gtest.h>

#include <sstream>

#include "mpa/automata/combinators.hpp"
#include "mpa/automata/explicit.hpp"
#include "mpa/automata/run.hpp"
#include "mpa/compiler/compile.hpp"
#include "mpa/harness/corpus.hpp"
#include "mpa/logic/gml.hpp"
#include "mpa/model/enumerate.hpp"
#include "mpa/model/tree_io.hpp"

using namespace mpa;

namespace {

Symbol sym(const char *s) { return intern_symbol(s); }

Verdict fp(const CmpaPtr &a, const std::string &tree) {
  return decide(*a, parse_tree(tree).model(), 0, Acceptance::fixed_point());
}

std::string name_at(const Cmpa &a, const RunTrace &tr, std::size_t t, NodeId v) {
  return a.state_name(tr.at(t, v));
}

const std::vector<RootedTree> &trees_pq(std::size_t n) {
  static std::map<std::size_t, std::vector<RootedTree>> cache;
  auto &v = cache[n];
  if (v.empty()) v = enumerate_trees(n, LabelSet{"p", "q"});
  return v;
}

}  // namespace

TEST(AtomicPy, Examples) {
  auto a = atomic_Py(sym("p"), fo_symbol("y"));
  EXPECT_EQ(a->bound().value, 1u);
  EXPECT_EQ(fp(a, "({p,x:y})"), Verdict::Accept);
  EXPECT_EQ(fp(a, "({} ({p,x:y}))"), Verdict::Accept);
  auto tr = run(*a, parse_tree("({} ({p,x:y}))").model());
  EXPECT_EQ(name_at(*a, tr, 1, 0), "q_p(y)");
  EXPECT_EQ(fp(a, "({} ({} ({})))"), Verdict::Reject);
}

TEST(AtomicRyz, Examples) {
  auto a = atomic_Ryz(fo_symbol("y"), fo_symbol("z"));
  EXPECT_EQ(a->bound().value, 1u);
  EXPECT_EQ(fp(a, "({x:y} ({x:z}))"), Verdict::Accept);
  auto tr = run(*a, parse_tree("({x:y} ({x:z}))").model());
  EXPECT_EQ(name_at(*a, tr, 1, 0), "q_E(y,z)");
  EXPECT_EQ(fp(a, "({x:y,x:z})"), Verdict::Reject);
  auto stuck = run(*a, parse_tree("({x:z} ({x:y}))").model());
  EXPECT_EQ(name_at(*a, stuck, 5, 0), "q_z");
  EXPECT_EQ(fp(a, "({x:z} ({x:y}))"), Verdict::Reject);
  // Propagation from below the root.
  EXPECT_EQ(fp(a, "({} ({} ({x:y} ({x:z}))))"), Verdict::Accept);
}

TEST(AtomicEq, Examples) {
  auto a = atomic_eq(fo_symbol("y"), fo_symbol("z"));
  auto t = parse_tree("({} ({} ({x:y,x:z})))");
  auto tr = run(*a, t.model());
  EXPECT_TRUE(a->accepting(tr.at(2, 0)));
  EXPECT_FALSE(a->accepting(tr.at(1, 0)));
  EXPECT_EQ(fp(a, "({x:y} ({x:z}))"), Verdict::Reject);
  EXPECT_EQ(fp(a, "({} ({}))"), Verdict::Reject);
}

TEST(Properness, Examples) {
  auto a = properness({fo_symbol("x")});
  EXPECT_EQ(a->bound().value, 2u);
  EXPECT_EQ(a->materialized_states(), 3u);
  auto single = run(*a, parse_tree("({x:x})").model());
  EXPECT_EQ(name_at(*a, single, 0, 0), "q_x>=1");
  EXPECT_TRUE(a->accepting(single.at(0, 0)));
  auto two = run(*a, parse_tree("({x:x} ({x:x}))").model());
  EXPECT_EQ(name_at(*a, two, 1, 0), "q_x>=2");
  EXPECT_TRUE(a->rejecting(two.at(1, 0)));
  auto none = parse_tree("({} ({}))");
  for (auto c : {Acceptance::standard(), Acceptance::fixed_point()})
    EXPECT_EQ(decide(*a, none.model(), 0, c), Verdict::Neither);
  EXPECT_EQ(properness({fo_symbol("x"), fo_symbol("y")})->materialized_states(), 9u);
}

TEST(ExistsFo, Examples) {
  auto child_p = compile_formula(parse_mso("exists y. (E(x,y) & p(y))"));
  EXPECT_EQ(fp(child_p, "({x:x} ({p}))"), Verdict::Accept);
  EXPECT_EQ(fp(child_p, "({x:x})"), Verdict::Reject);
  auto taut = compile_formula(parse_mso("exists y. y = y"));
  for (auto &t : trees_pq(4))
    EXPECT_EQ(decide(*taut, t.model(), 0, Acceptance::fixed_point()), Verdict::Accept);
}

TEST(ExistsSo, Examples) {
  auto yes = compile_formula(parse_mso("exists2 Y. Y(x)"));
  auto no = compile_formula(parse_mso("exists2 Y. !Y(x)"));
  auto never = compile_formula(parse_mso("exists2 Y. (Y(x) & !Y(x))"));
  for (auto &t : trees_pq(4)) {
    CompilationUnit u;
    u.point = fo_symbol("x");
    auto m = u.pointed(t.model(), 0);
    EXPECT_EQ(decide(*yes, m, 0, Acceptance::fixed_point()), Verdict::Accept);
    EXPECT_EQ(decide(*no, m, 0, Acceptance::fixed_point()), Verdict::Accept);
    EXPECT_EQ(decide(*never, m, 0, Acceptance::fixed_point()), Verdict::Reject);
  }
}

TEST(CompileMso, PointLabelAndSignature) {
  auto u = compile_mso(parse_mso("exists y. (E(x,y) & p(y))"));
  EXPECT_EQ(u.point, fo_symbol("x"));
  EXPECT_EQ(u.signature, LabelSet{"p"});
  EXPECT_EQ(u.variable_symbols, LabelSet{"x:x"});
  EXPECT_EQ(u.fixed_point->signature(), (LabelSet{"p", "x:x"}));
  EXPECT_TRUE(u.fixed_point->deterministic());
  EXPECT_TRUE(u.fixed_point->forgetful());
}

TEST(CompileMso, PxExhaustive) {
  auto u = compile_mso(parse_mso("p(x)"));
  for (auto &t : enumerate_trees(6, LabelSet{"p"})) {
    auto v = decide(*u.fixed_point, u.pointed(t.model(), 0), 0, Acceptance::fixed_point());
    EXPECT_EQ(v, t.label(0).contains(sym("p")) ? Verdict::Accept : Verdict::Reject);
  }
}

TEST(CompileMso, LeafExhaustive) {
  auto u = compile_mso(parse_mso("!exists y. E(x,y)"));
  for (auto &t : enumerate_trees(5, LabelSet{"p"})) {
    auto v = decide(*u.fixed_point, u.pointed(t.model(), 0), 0, Acceptance::fixed_point());
    EXPECT_EQ(v, t.size() == 1 ? Verdict::Accept : Verdict::Reject) << serialize_tree(t);
  }
}

TEST(CompileMso, CorpusAgreesWithOracle) {
  for (auto &[name, f] : load_mso_corpus(std::string(MPA_CORPUS_DIR) + "/mso")) {
    auto u = compile_mso(f);
    for (auto &t : trees_pq(4)) {
      bool truth = mso_check_root(t, f);
      auto m = u.pointed(t.model(), 0);
      EXPECT_EQ(decide(*u.fixed_point, m, 0, Acceptance::fixed_point()),
                truth ? Verdict::Accept : Verdict::Reject)
          << name << " on " << serialize_tree(t);
    }
  }
}

TEST(CompileMso, StabilizesByHeightPlusOne) {
  for (auto &[name, f] : load_mso_corpus(std::string(MPA_CORPUS_DIR) + "/mso")) {
    auto u = compile_mso(f);
    for (auto &t : trees_pq(4)) {
      auto tr = run(*u.fixed_point, u.pointed(t.model(), 0));
      for (NodeId v = 0; v < t.size(); ++v)
        for (std::size_t r = t.height(v) + 1; r < tr.rounds.size() + 1; ++r)
          EXPECT_EQ(tr.at(r, v), tr.at(t.height(v) + 1, v)) << name;
    }
  }
}

TEST(FixedPointSets, Py) {
  auto a = atomic_Py(sym("p"), fo_symbol("y"));
  auto sets = fixed_point_sets(*a);
  auto names = [&](LabelSet P) {
    std::set<std::string> out;
    for (auto q : sets.at(P)) out.insert(a->state_name(q));
    return out;
  };
  EXPECT_EQ(names(LabelSet{"p", "x:y"}), (std::set<std::string>{"q_p(y)"}));
  EXPECT_EQ(names(LabelSet{}), (std::set<std::string>{"q_p(y)", "q_!p(y)"}));
}

TEST(FixedPointSets, ConstantAndProperness) {
  ExplicitSpec s;
  s.states = {"q"};
  s.signature = LabelSet{"p"};
  s.init = [](LabelSet) { return std::vector<StateId>{0}; };
  s.delta = [](LabelSet, StateId, const Multiset<StateId> &) -> StateId { return 0; };
  auto c = make_explicit(std::move(s));
  auto cs = fixed_point_sets(*c);
  for (auto P : LabelSet{"p"}.subsets()) EXPECT_EQ(cs.at(P), std::vector<StateId>{0});

  auto pr = properness({fo_symbol("x")});
  auto ps = fixed_point_sets(*pr);
  auto has = [&](LabelSet P, const std::string &n) {
    for (auto q : ps.at(P))
      if (pr->state_name(q) == n) return true;
    return false;
  };
  EXPECT_TRUE(has(LabelSet{"x:x"}, "q_x>=1"));
  EXPECT_TRUE(has(LabelSet{"x:x"}, "q_x>=2"));
  for (auto n : {"q_x>=0", "q_x>=1", "q_x>=2"}) EXPECT_TRUE(has(LabelSet{}, n));
}

TEST(FixedPointSets, ClosureRecheck) {
  auto f = gml_to_mso(parse_gml("dia>=1 (p & dia>=1 q)"));
  auto u = compile_mso(f);
  auto reduced = compile_formula(f, kDefaultStateBudget, true);
  auto sets = fixed_point_sets(*reduced, u.point);
  const Cmpa &a = *reduced;
  std::set<StateId> all;
  for (auto &[bits, qs] : sets.per_label)
    if (!LabelSet(bits).contains(*u.point)) all.insert(qs.begin(), qs.end());
  std::vector<StateId> pool(all.begin(), all.end());
  // Every multiset of up to two children over the union stays inside.
  for (auto &[bits, qs] : sets.per_label) {
    std::set<StateId> mine(qs.begin(), qs.end());
    LabelSet P(bits);
    EXPECT_TRUE(mine.count(a.apply(P, 0, a.agg_empty())));
    for (auto q1 : pool) {
      AggId g1 = a.agg_add(a.agg_empty(), q1);
      EXPECT_TRUE(mine.count(a.apply(P, 0, g1)));
      for (auto q2 : pool) EXPECT_TRUE(mine.count(a.apply(P, 0, a.agg_add(g1, q2))));
    }
  }
}

TEST(Omnipresent, DiamondP) {
  auto u = compile_mso(gml_to_mso(parse_gml("dia>=1 p")), {.stages = 3});
  ASSERT_TRUE(u.omnipresent);
  EXPECT_FALSE(u.omnipresent->deterministic());
  auto yes = u.pointed(parse_tree("({} ({p}))").model(), 0);
  EXPECT_EQ(decide(*u.omnipresent, yes, 0, Acceptance::omnipresent(1)), Verdict::Accept);
  auto no = u.pointed(parse_tree("({})").model(), 0);
  EXPECT_NE(decide(*u.omnipresent, no, 0, Acceptance::omnipresent()), Verdict::Accept);
  // A round-0 guess may be the fixed point of a root with a p-child, so only
  // later rounds are free of acceptance.
  DecideOptions opts;
  bool accepted_at_zero = false;
  for_each_run(*u.omnipresent, no, opts, [&](const RunTrace &tr) {
    accepted_at_zero = accepted_at_zero || u.omnipresent->accepting(tr.at(0, 0));
    for (std::size_t t = 1; t < tr.rounds.size() + 2; ++t)
      EXPECT_FALSE(u.omnipresent->accepting(tr.at(t, 0)));
  });
  EXPECT_TRUE(accepted_at_zero);
  for (StateId q = 0; q < u.reduced->materialized_states(); ++q) {
    EXPECT_EQ(u.omnipresent->state_name(q), u.reduced->state_name(q));
    EXPECT_FALSE(u.omnipresent->rejecting(q));
  }
}

TEST(Omnipresent, LiteralStageOne) {
  auto u = compile_mso(gml_to_mso(parse_gml("dia>=1 p")), {.stages = 3, .reduce_final = false});
  EXPECT_EQ(u.reduced, u.fixed_point);
  auto yes = u.pointed(parse_tree("({} ({p}))").model(), 0);
  EXPECT_EQ(decide(*u.omnipresent, yes, 0, Acceptance::omnipresent(1)), Verdict::Accept);
  for (auto &t : trees_pq(3)) {
    auto v = decide(*u.final_automaton, u.pointed(t.model(), 0), 0, Acceptance::standard());
    EXPECT_EQ(v == Verdict::Accept, gml_eval(t, 0, parse_gml("dia>=1 p"))) << serialize_tree(t);
  }
}

TEST(Pipeline, FinalAgreesWithOracle) {
  for (auto text : {"p", "dia>=1 p", "dia>=2 p", "dia>=1 (p & dia>=1 q)", "!dia>=1 p"}) {
    auto g = parse_gml(text);
    auto u = compile_mso(gml_to_mso(g), {.stages = 3});
    for (auto &t : trees_pq(5)) {
      auto v = decide(*u.final_automaton, u.pointed(t.model(), 0), 0, Acceptance::standard());
      EXPECT_EQ(v == Verdict::Accept, gml_eval(t, 0, g)) << text << " " << serialize_tree(t);
    }
    for (StateId q = 0; q < u.final_automaton->materialized_states(); ++q)
      EXPECT_FALSE(u.final_automaton->rejecting(q));
  }
}

TEST(Pipeline, PAcceptsAtRoundZero) {
  auto u = compile_mso(gml_to_mso(parse_gml("p")), {.stages = 3});
  auto tr = run(*u.final_automaton, u.pointed(parse_tree("({p} ({}))").model(), 0));
  EXPECT_TRUE(u.final_automaton->accepting(tr.at(0, 0)));
}

TEST(Pipeline, RebuildIsIdentical) {
  auto f = gml_to_mso(parse_gml("dia>=2 p"));
  auto a = compile_mso(f, {.stages = 3});
  auto b = compile_mso(f, {.stages = 3});
  for (auto &t : trees_pq(4)) {
    auto ta = run(*a.final_automaton, a.pointed(t.model(), 0));
    auto tb = run(*b.final_automaton, b.pointed(t.model(), 0));
    ASSERT_EQ(ta.rounds.size(), tb.rounds.size());
    for (std::size_t r = 0; r < ta.rounds.size(); ++r)
      for (NodeId v = 0; v < t.size(); ++v)
        EXPECT_EQ(a.final_automaton->state_name(ta.rounds[r][v]),
                  b.final_automaton->state_name(tb.rounds[r][v]));
  }
}

TEST(Bounds, Bookkeeping) {
  auto py = compile_formula(parse_mso("p(x)"));
  EXPECT_EQ(py->bound().value, 1u);
  EXPECT_EQ(compile_formula(parse_mso("!p(x)"))->bound().value, 1u);
  auto conj = product(py, properness({fo_symbol("y")}));
  EXPECT_EQ(conj->bound().value, 2u);
  // exists y. p(y): power set over A_py x proper(y), |Q| = 2 * 3, k = 2.
  auto ex = compile_formula(parse_mso("exists y. p(y)"));
  EXPECT_EQ(ex->bound().value, 12u);
  EXPECT_EQ(ex->formal_states().value, 64u);
  auto ex2 = compile_formula(parse_mso("exists2 Y. Y(x)"));
  EXPECT_EQ(ex2->bound().value, 2u);
  auto u = compile_mso(gml_to_mso(parse_gml("p")), {.stages = 3});
  EXPECT_EQ(u.final_automaton->bound(), u.reduced->bound() * u.reduced->formal_states());
}

TEST(Stats, Report) {
  auto u = compile_mso(gml_to_mso(parse_gml("dia>=1 p")), {.stages = 3});
  std::ostringstream out;
  write_stats(out, u);
  EXPECT_NE(out.str().find("fixed-point\t"), std::string::npos);
  EXPECT_NE(out.str().find("final\t"), std::string::npos);
}

TEST(CompileGmsc, Propagation) {
  auto prog = parse_gmsc("X(0) :- p; X :- dia>=1 X; appointed: X;");
  auto a = compile_gmsc(prog);
  auto t = parse_tree("({} ({p}))");
  auto tr = run(*a, t.model());
  EXPECT_FALSE(a->accepting(tr.at(0, 0)));
  EXPECT_TRUE(a->accepting(tr.at(1, 0)));
  EXPECT_EQ(decide(*a, t.model(), 0, Acceptance::standard()), Verdict::Accept);
}

TEST(CompileGmsc, NoAppointedAcceptsNothing) {
  auto prog = parse_gmsc("X(0) :- p; X :- X;");
  auto a = compile_gmsc(prog);
  for (auto &t : trees_pq(4))
    EXPECT_EQ(decide(*a, t.model(), 0, Acceptance::standard()), Verdict::Neither);
}

TEST(CompileGmsc, CorpusAgrees) {
  for (auto &[name, prog] : load_gmsc_corpus(std::string(MPA_CORPUS_DIR) + "/gmsc")) {
    auto a = compile_gmsc(prog);
    for (auto &t : trees_pq(4))
      for (NodeId v = 0; v < t.size(); ++v)
        EXPECT_EQ(decide(*a, t.model(), v, Acceptance::standard()) == Verdict::Accept,
                  gmsc_accepts(t, v, prog))
            << name << " " << serialize_tree(t) << " node " << v;
  }
}
