#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>
#include <sstream>

#include "mpa/harness/samples.hpp"
#include "mpa/compiler/compile.hpp"
#include "mpa/gnnf/gnn.hpp"
#include "mpa/logic/gml.hpp"
#include "mpa/model/enumerate.hpp"
#include "mpa/model/tree_io.hpp"

using namespace mpa;

namespace {

std::vector<FloatSystem> small_systems() {
  return {FloatSystem(1, 1, 2), FloatSystem(2, 1, 2), FloatSystem(2, 2, 3),
          FloatSystem(2, 1, 5), FloatSystem(4, 2, 2)};
}

Rational pow_int(unsigned b, int e) {
  Rational r = 1;
  for (int i = 0; i < std::abs(e); ++i) r *= b;
  return e < 0 ? Rational(1 / r) : r;
}

// Every value of every encoding, straight from +-0.d1..dp * beta^(+-e).
std::set<Rational> brute_values(const FloatSystem &s) {
  std::set<Rational> out;
  unsigned sig = 1, ex = 1;
  for (unsigned i = 0; i < s.p(); ++i) sig *= s.beta();
  for (unsigned i = 0; i < s.q(); ++i) ex *= s.beta();
  for (unsigned d = 0; d < sig; ++d)
    for (int e = -static_cast<int>(ex - 1); e <= static_cast<int>(ex - 1); ++e)
      for (int sign : {1, -1}) out.insert(Rational(sign * static_cast<int>(d), sig) * pow_int(s.beta(), e));
  return out;
}

Rational brute_nearest(const std::set<Rational> &values, const Rational &r) {
  Rational best = *values.begin();
  for (auto &v : values) {
    Rational dv = abs(v - r), db = abs(best - r);
    if (dv < db || (dv == db && abs(v) > abs(best))) best = v;
  }
  return best;
}

FVec vec(const FloatSystem &s, std::initializer_list<const char *> xs) {
  FVec out;
  for (auto x : xs) out.push_back(s.from_decimal(x));
  return out;
}

}  // namespace

TEST(Floats, DecodeExample) {
  FloatSystem s(1, 1, 2);
  EXPECT_EQ(s.decode(FloatNum{false, {1}, false, {1}}), Rational(1));
  EXPECT_EQ(s.decode(FloatNum{true, {1}, true, {1}}), Rational(-1, 4));
  EXPECT_EQ(s.nearest(2), s.nearest(1));
  EXPECT_EQ(s.decode(s.nearest(2)), Rational(1));
  EXPECT_EQ(s.max_value(), Rational(1));
}

TEST(Floats, ValueSetMatchesEncodings) {
  for (auto &s : small_systems()) {
    auto brute = brute_values(s);
    EXPECT_EQ(std::vector<Rational>(brute.begin(), brute.end()), s.values()) << s.describe();
  }
  // (4,2,2): largest value 0.1111 * 2^3, so integers up to 7 are exact.
  FloatSystem demo(4, 2, 2);
  EXPECT_EQ(demo.max_value(), Rational(15, 2));
  for (int i = 0; i <= 7; ++i) EXPECT_TRUE(demo.exact(i));
  EXPECT_FALSE(demo.exact(8));
}

TEST(Floats, NearestIdempotentAndCanonical) {
  for (auto &s : small_systems())
    for (auto &v : s.values()) {
      auto f = s.nearest(v);
      EXPECT_EQ(s.decode(f), v);
      EXPECT_EQ(s.nearest(s.decode(f)), f);
    }
  FloatSystem s(4, 2, 2);
  EXPECT_EQ(s.canonical(FloatNum{true, {0, 0, 0, 0}, true, {1, 1}}), s.zero());
  EXPECT_EQ(s.zero(), (FloatNum{false, {0, 0, 0, 0}, false, {0, 0}}));
  // 1 = 0.1000 * 2^1 = 0.0100 * 2^2; the normalized one is canonical.
  EXPECT_EQ(s.canonical(FloatNum{false, {0, 1, 0, 0}, false, {1, 0}}),
            (FloatNum{false, {1, 0, 0, 0}, false, {0, 1}}));
}

TEST(Floats, NearestMatchesLinearScan) {
  for (auto &s : small_systems()) {
    auto values = brute_values(s);
    Rational lo = -s.max_value() * 2, hi = s.max_value() * 2;
    const int steps = 997;
    Rational prev;
    for (int i = 0; i <= steps; ++i) {
      Rational r = lo + (hi - lo) * Rational(i, steps);
      Rational got = s.decode(s.nearest(r));
      EXPECT_EQ(got, brute_nearest(values, r)) << s.describe() << " r=" << rational_string(r);
      if (i > 0) EXPECT_LE(prev, got);
      prev = got;
    }
    // Midpoints exercise the tie rule.
    for (std::size_t i = 0; i + 1 < s.values().size(); ++i) {
      Rational mid = (s.values()[i] + s.values()[i + 1]) / 2;
      EXPECT_EQ(s.decode(s.nearest(mid)), brute_nearest(values, mid));
    }
  }
}

TEST(Floats, TiesRoundAwayFromZero) {
  FloatSystem s(1, 1, 2);  // values 0, 1/4, 1/2, 1 and negatives
  EXPECT_EQ(s.decode(s.nearest(Rational(3, 4))), Rational(1));
  EXPECT_EQ(s.decode(s.nearest(Rational(-3, 4))), Rational(-1));
  EXPECT_EQ(s.decode(s.nearest(Rational(1, 8))), Rational(1, 4));
}

TEST(Floats, SumAndProduct) {
  FloatSystem s(1, 1, 2);
  auto half = s.from_decimal("0.5"), one = s.from_decimal("1");
  EXPECT_EQ(s.fsum(half, half), one);
  EXPECT_EQ(s.fsum(one, one), one);
  EXPECT_EQ(s.fmul(half, half), s.from_decimal("0.25"));
  for (auto &sys : small_systems()) {
    for (auto &v : sys.values()) {
      auto a = sys.nearest(v);
      EXPECT_EQ(sys.fsum(a, sys.zero()), a);
    }
  }
  FloatSystem c(2, 1, 2);
  for (auto &x : c.values())
    for (auto &y : c.values()) {
      auto a = c.nearest(x), b = c.nearest(y);
      EXPECT_EQ(c.fsum(a, b), c.fsum(b, a));
      EXPECT_EQ(c.decode(c.fsum(a, b)), brute_nearest(brute_values(c), x + y));
    }
}

TEST(Floats, SumIsNotAssociative) {
  // 1 + 1/8 rounds back to 1 but 1/8 + 1/8 = 1/4 is exact.
  FloatSystem s(2, 2, 2);
  auto one = s.from_decimal("1"), eighth = s.from_decimal("0.125");
  EXPECT_NE(s.fsum(s.fsum(one, eighth), eighth), s.fsum(one, s.fsum(eighth, eighth)));
}

TEST(Floats, ReluStar) {
  FloatSystem s(4, 2, 2);
  EXPECT_EQ(s.relu_star(s.from_decimal("-0.5")), s.zero());
  EXPECT_EQ(s.relu_star(s.from_decimal("1.7")), s.one());
  auto x = s.from_decimal("0.3125");
  EXPECT_EQ(s.relu_star(x), x);
  EXPECT_EQ(s.relu_star(s.one()), s.one());
}

TEST(Floats, DecimalLiterals) {
  FloatSystem s(4, 2, 2);
  bool exact = false;
  EXPECT_EQ(s.decode(s.from_decimal("0.375", &exact)), Rational(3, 8));
  EXPECT_TRUE(exact);
  s.from_decimal("0.3", &exact);
  EXPECT_FALSE(exact);
  EXPECT_EQ(s.decode(s.from_decimal("-3/8")), Rational(-3, 8));
  EXPECT_EQ(s.decode(s.from_decimal("2.5e-1")), Rational(1, 4));
  EXPECT_THROW(s.from_decimal("abc"), SyntaxError);
  EXPECT_EQ(s.to_string(s.from_decimal("-0.375")), "(-1100,-01)");
  EXPECT_EQ(rational_string(Rational(-3, 8)), "-3/8");
}

TEST(Floats, ForCounts) {
  for (unsigned long k : {1UL, 2UL, 7UL, 8UL, 100UL}) {
    auto s = FloatSystem::for_counts(k);
    for (unsigned long i = 0; i <= k; ++i) EXPECT_TRUE(s.exact(Rational(i))) << k;
  }
}

TEST(Aggregate, IncreasingOrderIgnoresInputOrder) {
  FloatSystem s(2, 2, 2);
  std::vector<FVec> m = {vec(s, {"1"}), vec(s, {"0.125"}), vec(s, {"0.125"}), vec(s, {"-0.25"})};
  auto expected = sum_increasing(s, 1, m);
  // -1/4 + 1/8 = -1/8, + 1/8 = 0, + 1 = 1.
  EXPECT_EQ(s.decode(expected[0]), Rational(1));
  std::sort(m.begin(), m.end());
  do {
    EXPECT_EQ(sum_increasing(s, 1, m), expected);
  } while (std::next_permutation(m.begin(), m.end()));
}

TEST(Aggregate, CapVectors) {
  FloatSystem s(2, 1, 2);
  std::vector<FVec> m(5, vec(s, {"0.5"}));
  m.push_back(vec(s, {"0.25"}));
  EXPECT_EQ(cap_vectors(m, 2).size(), 3u);
  EXPECT_EQ(cap_vectors(m, 10).size(), 6u);
}

TEST(RSimple, ZeroMapAndIdentityProbe) {
  auto s = std::make_shared<const FloatSystem>(4, 2, 2);
  const auto p = intern_symbol("p");
  auto init = [s, p](LabelSet P) { return FVec{P.contains(p) ? s->one() : s->zero()}; };
  auto accept = [s](const FVec &x) { return s->decode(x[0]) == 1; };
  auto zero = make_rsimple(s, LabelSet{"p"}, 2, init, {{{s->zero()}}, {{s->zero()}}, {s->zero()}},
                           accept);
  auto ident = make_rsimple(s, LabelSet{"p"}, 2, init, {{{s->one()}}, {{s->zero()}}, {s->zero()}},
                            accept);
  auto t = parse_tree("({p} ({}) ({p}))");
  auto tz = gnn_run(zero, t.model());
  for (NodeId v = 0; v < t.size(); ++v) EXPECT_EQ(tz.at(1, v), FVec{s->zero()});
  auto ti = gnn_run(ident, t.model());
  EXPECT_EQ(ti.stabilized_at, std::optional<std::size_t>(0));
  for (std::size_t r = 0; r < 5; ++r) {
    EXPECT_EQ(ti.at(r, 0), FVec{s->one()});
    EXPECT_EQ(ti.at(r, 1), FVec{s->zero()});
    EXPECT_EQ(ti.at(r, 2), FVec{s->one()});
  }
  EXPECT_TRUE(gnn_accepts(ident, t.model(), 0));
  EXPECT_FALSE(gnn_accepts(ident, t.model(), 1));
}

TEST(RSimple, ReachabilityByPropagation) {
  // x' = ReLU*(x + sum of children): becomes 1 once a p-node is below.
  auto s = std::make_shared<const FloatSystem>(4, 2, 2);
  const auto p = intern_symbol("p");
  auto g = make_rsimple(
      s, LabelSet{"p"}, 1, [s, p](LabelSet P) { return FVec{P.contains(p) ? s->one() : s->zero()}; },
      {{{s->one()}}, {{s->one()}}, {s->zero()}},
      [s](const FVec &x) { return s->decode(x[0]) == 1; });
  for (auto &t : enumerate_trees(5, LabelSet{"p"})) {
    bool any_p = false;
    for (NodeId v = 0; v < t.size(); ++v) any_p = any_p || !t.model().labels[v].empty();
    EXPECT_EQ(gnn_accepts(g, t.model(), 0), any_p) << serialize_tree(t);
  }
}

TEST(RSimple, BoundedAggregationFuzz) {
  auto s = std::make_shared<const FloatSystem>(3, 2, 2);
  auto g = make_rsimple(s, LabelSet{}, 3, [s](LabelSet) { return FVec{s->zero(), s->zero()}; },
                        {{{s->one(), s->zero()}, {s->zero(), s->one()}},
                         {{s->one(), s->one()}, {s->zero(), s->one()}},
                         {s->zero(), s->zero()}},
                        [](const FVec &) { return false; });
  std::mt19937 rng(7);
  const auto &vals = s->values();
  std::uniform_int_distribution<std::size_t> pick(0, vals.size() - 1), len(0, 12), pool(1, 3);
  for (int it = 0; it < 200; ++it) {
    std::vector<FVec> distinct(pool(rng));
    for (auto &v : distinct) v = {s->nearest(vals[pick(rng)]), s->nearest(vals[pick(rng)])};
    std::vector<FVec> m(len(rng));
    for (auto &v : m) v = distinct[pick(rng) % distinct.size()];
    FVec self = {s->nearest(vals[pick(rng)]), s->zero()};
    EXPECT_EQ(g.step(self, m), g.com(self, g.agg(cap_vectors(m, g.bound))));
  }
}

TEST(RSimple, SerialMatchesParallel) {
  auto s = std::make_shared<const FloatSystem>(4, 2, 2);
  const auto p = intern_symbol("p");
  auto g = make_rsimple(
      s, LabelSet{"p"}, 2, [s, p](LabelSet P) { return FVec{P.contains(p) ? s->one() : s->zero()}; },
      {{{s->from_decimal("0.5")}}, {{s->from_decimal("0.25")}}, {s->zero()}},
      [](const FVec &) { return false; });
  std::mt19937_64 rng(3);
  auto t = random_tree(600, LabelSet{"p"}, rng);
  auto a = gnn_run(g, t.model(), {.parallel = false});
  auto b = gnn_run(g, t.model(), {.parallel = true});
  EXPECT_EQ(a.rounds, b.rounds);
}

TEST(Embed, APyTraceEquality) {
  auto a = samples::a_py();
  auto e = embed_fcmpa(a);
  EXPECT_EQ(e.gnn.dim, a->signature().size() + 2);
  for (auto &t : enumerate_trees(4, LabelSet{"p", "x:y"})) {
    auto ta = run(*a, t.model());
    auto tg = gnn_run(e.gnn, t.model());
    for (std::size_t r = 0; r < ta.rounds.size() + 2; ++r)
      for (NodeId v = 0; v < t.size(); ++v) EXPECT_EQ(e.decode(tg.at(r, v)), ta.at(r, v));
    for (NodeId v = 0; v < t.size(); ++v)
      EXPECT_EQ(gnn_accepts(e.gnn, t.model(), v),
                decide(*a, t.model(), v, Acceptance::standard()) == Verdict::Accept);
  }
}

TEST(Embed, NonForgetfulAutomaton) {
  auto a = samples::flip_flop();
  auto e = embed_fcmpa(a);
  auto t = parse_tree("({} ({}))");
  auto tg = gnn_run(e.gnn, t.model());
  EXPECT_EQ(tg.cycle_start, std::optional<std::size_t>(0));
  EXPECT_EQ(e.decode(tg.at(3, 0)), a->init(LabelSet{})[0] == 0 ? 1u : 0u);
}

TEST(Embed, CompiledFinalAutomaton) {
  for (auto text : {"dia>=1 p", "dia>=1 (p & dia>=1 q)"}) {
    auto g = parse_gml(text);
    auto u = compile_mso(gml_to_mso(g), {.stages = 3});
    auto e = embed_fcmpa(u.final_automaton);
    for (auto &t : enumerate_trees(4, LabelSet{"p", "q"})) {
      auto m = u.pointed(t.model(), 0);
      EXPECT_EQ(gnn_accepts(e.gnn, m, 0), gml_eval(t, 0, g)) << text << " " << serialize_tree(t);
    }
  }
}

TEST(Embed, ClampAtBound) {
  auto a = samples::a_py();
  auto e = embed_fcmpa(a);
  const auto k = e.gnn.bound;
  FVec self = e.encode(LabelSet{}, a->init(LabelSet{})[0]);
  FVec child = e.encode(LabelSet{"p", "x:y"}, a->init(LabelSet{"p", "x:y"})[0]);
  EXPECT_EQ(e.gnn.step(self, std::vector<FVec>(k + 3, child)),
            e.gnn.step(self, std::vector<FVec>(k, child)));
  EXPECT_EQ(e.gnn.agg(std::vector<FVec>(k + 3, child)), e.gnn.agg(std::vector<FVec>(k, child)));
}

TEST(Embed, SystemTooSmall) {
  auto u = compile_mso(gml_to_mso(parse_gml("dia>=2 p")), {.stages = 3});
  ASSERT_GE(u.final_automaton->bound().value, 2u);
  EXPECT_THROW(embed_fcmpa(u.final_automaton, std::make_shared<const FloatSystem>(1, 1, 2)),
               SystemTooSmall);
}

TEST(GnnTrace, TsvFormat) {
  auto s = std::make_shared<const FloatSystem>(4, 2, 2);
  auto g = make_rsimple(s, LabelSet{}, 1, [s](LabelSet) { return FVec{s->from_decimal("0.5")}; },
                        {{{s->from_decimal("0.5")}}, {{s->zero()}}, {s->zero()}},
                        [](const FVec &) { return false; });
  auto tr = gnn_run(g, parse_tree("({})").model());
  std::ostringstream out;
  write_gnn_trace_tsv(out, *s, tr);
  const std::string head = "round\tnode\tvector\n0\t0\t1/2\n1\t0\t1/4\n";
  EXPECT_EQ(out.str().substr(0, head.size()), head);
}
