//
// Project mpa - message-passing automata over labeled trees
// SPDX-License-Identifier: Apache-2.0
//

#include "mpa/logic/extendable.hpp"

#include <map>

namespace mpa {
namespace {

void check_preconditions(bool holds_at_root, std::size_t k, std::size_t witness_depth) {
  if (!holds_at_root)
    throw Error("k_extendable_check: formula is false at the root of the input tree");
  if (k < witness_depth)
    throw Error("k_extendable_check: k = " + std::to_string(k) +
                " is below the modal depth " + std::to_string(witness_depth) +
                " of the true disjunct");
}

/// All subformulas, children before parents.
void subformulas(const GmlFormula &f, std::vector<GmlFormula> &out) {
  if (f->left) subformulas(f->left, out);
  if (f->right) subformulas(f->right, out);
  out.push_back(f);
}

}  // namespace

ExtendabilityResult k_extendable_check(const RootedTree &tree, const MsoFormula &phi,
                                       std::size_t k, const OmegaGml &witness,
                                       const ExtendabilityOptions &opts) {
  int d = witness.first_true(tree, tree.root());
  if (d < 0) throw Error("k_extendable_check: no witness disjunct holds at the root");
  check_preconditions(mso_check_root(tree, phi, "x", opts.oracle), k,
                      modal_depth(witness.disjuncts[d]));

  ExtendabilityResult res;
  auto prefix = k_prefix(tree, k);
  ExtensionEnumerator ext(prefix, k, opts.caps, opts.alphabet);
  ext.for_each(opts.budget, [&](const RootedTree &t) {
    ++res.checked;
    if (!mso_check_root(t, phi, "x", opts.oracle)) {
      res.holds = false;
      res.counterexample = t;
      return false;
    }
    return true;
  });
  return res;
}

ExtendabilityResult k_extendable_check_gml(const RootedTree &tree, const GmlFormula &psi,
                                           std::size_t k, const ExtendabilityOptions &opts,
                                           const MsoFormula *translation) {
  check_preconditions(gml_eval(tree, tree.root(), psi), k, modal_depth(psi));

  std::vector<GmlFormula> subs;
  subformulas(psi, subs);

  auto prefix = k_prefix(tree, k);
  ExtensionEnumerator ext(prefix, k, opts.caps, opts.alphabet);
  const auto &frontier = ext.frontier();

  // Per frontier node: one representative option per truth-vector class.
  std::vector<std::vector<std::size_t>> reps(frontier.size());
  for (std::size_t i = 0; i < frontier.size(); ++i) {
    std::map<std::vector<char>, std::size_t> classes;
    for (std::size_t o = 0; o < ext.options(); ++o) {
      auto local = ext.build_local(prefix.label(frontier[i]), o);
      std::vector<char> key;
      key.reserve(subs.size());
      for (auto &s : subs) key.push_back(gml_eval_all(local.model(), s)[0]);
      classes.try_emplace(std::move(key), o);
    }
    for (auto &[key, o] : classes) reps[i].push_back(o);
  }

  SatCount combos{1};
  for (auto &r : reps) combos = combos * SatCount{r.size()};
  if (combos.value > opts.budget)
    throw BudgetExceeded("k_extendable_check_gml: " + combos.to_string() +
                         " class combinations exceed budget " + std::to_string(opts.budget));

  ExtendabilityResult res;
  std::vector<std::size_t> pick(frontier.size(), 0);
  while (true) {
    std::vector<std::size_t> choice(frontier.size());
    for (std::size_t i = 0; i < frontier.size(); ++i) choice[i] = reps[i][pick[i]];
    auto t = ext.build(choice);
    ++res.checked;
    bool ok = gml_eval(t, t.root(), psi);
    if (ok && translation) ok = mso_check_root(t, *translation, "x", opts.oracle);
    if (!ok) {
      res.holds = false;
      res.counterexample = t;
      return res;
    }
    std::size_t i = 0;
    while (i < pick.size() && ++pick[i] == reps[i].size()) pick[i++] = 0;
    if (i == pick.size()) break;
  }
  return res;
}

}  // namespace mpa
