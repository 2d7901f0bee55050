#include <gtest/gtest.h>

#include <set>

#include "mpa/model/enumerate.hpp"
#include "mpa/model/tree.hpp"
#include "mpa/model/tree_io.hpp"

using namespace mpa;

namespace {

RootedTree chain(std::size_t n) {
  std::vector<std::optional<NodeId>> parents;
  for (std::size_t i = 0; i < n; ++i)
    parents.push_back(i == 0 ? std::nullopt : std::optional<NodeId>(i - 1));
  return RootedTree::from_parents(parents, std::vector<LabelSet>(n));
}

}  // namespace

TEST(Validate, SingleNode) {
  TreeCandidate c{{LabelSet{}}, {}};
  auto t = RootedTree::validate(c);
  EXPECT_EQ(t.size(), 1u);
  EXPECT_EQ(t.depth(), 0u);
}

TEST(Validate, TwoRoots) {
  TreeCandidate c{{LabelSet{}, LabelSet{}}, {}};
  try {
    RootedTree::validate(c);
    FAIL();
  } catch (const TreeValidationError &e) {
    EXPECT_EQ(e.kind(), TreeValidationError::Kind::MultipleRoots);
    EXPECT_EQ(e.nodes(), (std::vector<NodeId>{0, 1}));
  }
}

TEST(Validate, CycleAndDuplicateParent) {
  TreeCandidate cyc{{LabelSet{}, LabelSet{}}, {{0, 1}, {1, 0}}};
  try {
    RootedTree::validate(cyc);
    FAIL();
  } catch (const TreeValidationError &e) {
    EXPECT_EQ(e.kind(), TreeValidationError::Kind::Cycle);
  }
  TreeCandidate dup{{LabelSet{}, LabelSet{}, LabelSet{}}, {{0, 1}, {0, 2}, {1, 2}}};
  try {
    RootedTree::validate(dup);
    FAIL();
  } catch (const TreeValidationError &e) {
    EXPECT_EQ(e.kind(), TreeValidationError::Kind::DuplicateParent);
    EXPECT_EQ(e.nodes(), (std::vector<NodeId>{2}));
  }
}

TEST(Prefix, ChainAndIdempotence) {
  auto t = chain(4);
  EXPECT_EQ(k_prefix(t, 1).size(), 2u);
  EXPECT_EQ(k_prefix(t, 0).size(), 1u);
  EXPECT_EQ(k_prefix(t, 3), t);
  EXPECT_EQ(k_prefix(t, 10), t);
  for (auto &u : enumerate_trees(5, LabelSet{"p"}))
    for (std::size_t k = 0; k < 5; ++k)
      EXPECT_EQ(k_prefix(k_prefix(u, k), k), k_prefix(u, k));
}

TEST(Interpretation, AddsVariableLabels) {
  auto t = parse_tree("({} ({}))");
  Interpretation i;
  i.first_order["x"] = 1;
  auto u = apply_interpretation(t, i);
  EXPECT_EQ(u.label(0), LabelSet{});
  EXPECT_EQ(u.label(1), LabelSet::single(fo_symbol("x")));
  EXPECT_EQ(apply_interpretation(t, Interpretation{}), t);
  Interpretation j;
  j.second_order["Y"] = {0, 1};
  auto w = apply_interpretation(t, j);
  EXPECT_TRUE(w.label(0).contains(so_symbol("Y")));
  EXPECT_TRUE(w.label(1).contains(so_symbol("Y")));
  Interpretation bad;
  bad.first_order["x"] = 7;
  EXPECT_THROW(apply_interpretation(t, bad), UnknownNode);
}

TEST(TreeIo, ParseAndSerialize) {
  auto t = parse_tree("({p} ({q}) ({}))");
  EXPECT_EQ(t.size(), 3u);
  EXPECT_EQ(t.label(0), LabelSet{"p"});
  EXPECT_EQ(t.children(0).size(), 2u);
  EXPECT_EQ(serialize_tree(parse_tree("({})")), "({})");
  EXPECT_EQ(serialize_tree(parse_tree("({q, p})")), "({p,q})");
  EXPECT_EQ(serialize_tree(parse_tree(" ( {x:y} ( {X:Z} ) ) ")), "({x:y} ({X:Z}))");
}

TEST(TreeIo, SyntaxErrorPosition) {
  try {
    parse_tree("({p}\n  ({q)");
    FAIL();
  } catch (const SyntaxError &e) {
    EXPECT_EQ(e.line(), 2u);
    EXPECT_EQ(e.column(), 6u);
  }
  EXPECT_THROW(parse_tree("({p} ({q})"), SyntaxError);
  EXPECT_THROW(parse_tree("({1p})"), SyntaxError);
}

TEST(TreeIo, RoundTripAll) {
  for (auto &t : enumerate_trees(5, LabelSet{"p", "q"})) {
    auto s = serialize_tree(t);
    auto u = parse_tree(s);
    EXPECT_EQ(u, t);
    EXPECT_EQ(serialize_tree(u), s);
  }
}

TEST(EnumerateTrees, Counts) {
  EXPECT_EQ(enumerate_trees(1, LabelSet{"p"}).size(), 2u);
  EXPECT_EQ(enumerate_trees(2, LabelSet{}).size(), 2u);
  EXPECT_EQ(enumerate_trees(3, LabelSet{}).size(), 4u);
  // Unlabeled rooted trees: 1, 1, 2, 4, 9, 20 for sizes 1..6.
  EXPECT_EQ(enumerate_trees(6, LabelSet{}).size(), 37u);
}

TEST(EnumerateTrees, NoIsomorphicDuplicates) {
  auto all = enumerate_trees(5, LabelSet{"p", "q"});
  std::set<std::string> seen;
  for (auto &t : all) EXPECT_TRUE(seen.insert(serialize_tree(t)).second);
}

TEST(EnumerateTrees, MatchesBruteForceLabeling) {
  // Independent count: label every unlabeled shape in all ways and dedupe.
  std::set<std::string> brute;
  LabelSet alpha{"p"};
  for (auto &shape : enumerate_trees(5, LabelSet{})) {
    std::size_t n = shape.size();
    auto subsets = alpha.subsets();
    std::vector<std::size_t> idx(n, 0);
    while (true) {
      std::vector<LabelSet> labels;
      for (auto i : idx) labels.push_back(subsets[i]);
      brute.insert(serialize_tree(shape.relabeled(labels)));
      std::size_t i = 0;
      while (i < n && ++idx[i] == subsets.size()) idx[i++] = 0;
      if (i == n) break;
    }
  }
  EXPECT_EQ(enumerate_trees(5, alpha).size(), brute.size());
}

TEST(EnumerateExtensions, SpecExample) {
  auto ext = enumerate_extensions(RootedTree{}, 0, {1, 1}, LabelSet{"p"});
  std::set<std::string> got;
  for (auto &t : ext) got.insert(serialize_tree(t));
  EXPECT_EQ(got, (std::set<std::string>{"({})", "({} ({}))", "({} ({p}))"}));
  EXPECT_EQ(ext.size(), 3u);
}

TEST(EnumerateExtensions, ZeroDepthYieldsPrefix) {
  auto p = parse_tree("({p} ({q}))");
  auto ext = enumerate_extensions(p, 1, {0, 3}, LabelSet{"p"});
  ASSERT_EQ(ext.size(), 1u);
  EXPECT_EQ(ext[0], p);
}

TEST(EnumerateExtensions, PrefixPreservedAndDistinct) {
  auto p = parse_tree("({p} ({q} ({})) ({}))");
  auto ext = enumerate_extensions(p, 2, {2, 2}, LabelSet{"p"});
  std::set<std::string> seen;
  for (auto &t : ext) {
    EXPECT_EQ(k_prefix(t, 2), p);
    seen.insert(serialize_tree(t));
  }
  EXPECT_EQ(seen.size(), ext.size());
}

TEST(EnumerateExtensions, OptionCountMatchesBruteForce) {
  // Forests of <= 2 trees, each of depth <= 1 and branching <= 2, over {p}:
  // 2 labels x (1 + 2 + 3) children multisets = 12 shapes; forests = C(12+2,2) = 91.
  ExtensionEnumerator e(RootedTree{}, 0, {2, 2}, LabelSet{"p"});
  EXPECT_EQ(e.options(), 91u);
  std::set<std::string> seen;
  for (std::size_t o = 0; o < e.options(); ++o)
    seen.insert(serialize_tree(e.build_local(LabelSet{}, o)));
  EXPECT_EQ(seen.size(), 91u);
}

TEST(EnumerateExtensions, Budget) {
  auto p = parse_tree("({} ({}) ({}) ({}))");
  EXPECT_THROW(enumerate_extensions(p, 1, {2, 2}, LabelSet{"p", "q"}, 1000),
               BudgetExceeded);
}
