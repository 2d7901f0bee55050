#include <gtest/gtest.h>

#include <sstream>

#include "mpa/compiler/compile.hpp"
#include "mpa/harness/check.hpp"
#include "mpa/harness/fuzz.hpp"
#include "mpa/logic/mso.hpp"
#include "mpa/model/enumerate.hpp"

using namespace mpa;

namespace {

struct Checked {
  CompilationUnit unit;
  std::vector<RootedTree> trees;
  std::function<bool(const RootedTree &)> oracle;
};

Checked setup(const std::string &formula, std::size_t max_nodes) {
  Checked c;
  c.unit = compile_mso(parse_mso(formula));
  c.trees = enumerate_trees(max_nodes, LabelSet{"p", "q"});
  auto phi = c.unit.formula;
  c.oracle = [phi](const RootedTree &t) { return mso_check_root(t, phi, "x"); };
  return c;
}

std::string tsv(const CheckReport &r) {
  std::ostringstream s;
  r.write_tsv(s);
  return s.str();
}

}  // namespace

TEST(Check, SerialMatchesParallel) {
  auto c = setup("exists y. (E(x,y) & p(y))", 4);
  CheckOptions serial;
  serial.parallel = false;
  auto a = check_against_oracle(c.unit, *c.unit.fixed_point, "child_p", c.trees, c.oracle, serial);
  auto b = check_against_oracle(c.unit, *c.unit.fixed_point, "child_p", c.trees, c.oracle);
  EXPECT_EQ(a.cases.size(), c.trees.size());
  EXPECT_TRUE(a.ok());
  EXPECT_EQ(a.neither, 0u);
  EXPECT_EQ(tsv(a), tsv(b));
}

TEST(Check, InjectedSwapIsCaught) {
  auto c = setup("exists y. (E(x,y) & p(y))", 3);
  CheckOptions opts;
  opts.inject_swap = true;
  auto r = check_against_oracle(c.unit, *c.unit.fixed_point, "child_p", c.trees, c.oracle, opts);
  EXPECT_FALSE(r.ok());
  EXPECT_EQ(r.disagree, c.trees.size());
  ASSERT_TRUE(r.first_counterexample);
  EXPECT_EQ(r.first_counterexample->tree, r.cases.front().tree);
}

TEST(Check, StageNames) {
  for (auto s : {Stage::FixedPoint, Stage::Omnipresent, Stage::Final})
    EXPECT_EQ(parse_stage(to_string(s)), s);
  EXPECT_ANY_THROW(parse_stage("stage-four"));
}

TEST(Fuzz, SameSeedSameReport) {
  FuzzOptions opts;
  opts.seed = 11;
  opts.cases = 200;
  opts.max_nodes = 5;
  opts.corpus = MPA_CORPUS_DIR;
  auto once = fuzz(opts);
  opts.parallel = false;
  auto again = fuzz(opts);
  std::ostringstream a, b;
  once.write(a);
  again.write(b);
  EXPECT_EQ(a.str(), b.str());
  EXPECT_EQ(once.failures, 0u) << a.str();
}

TEST(Fuzz, EveryPropertyRuns) {
  for (const auto &p : fuzz_properties()) {
    FuzzOptions opts;
    opts.cases = 20;
    opts.max_nodes = 4;
    opts.property = p;
    opts.corpus = MPA_CORPUS_DIR;
    auto r = fuzz(opts);
    ASSERT_EQ(r.cases.size(), 20u);
    for (auto &c : r.cases) EXPECT_EQ(c.property, p);
    EXPECT_EQ(r.failures, 0u) << p;
  }
}
