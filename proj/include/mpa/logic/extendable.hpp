//
// Project mpa - message-passing automata over labeled trees
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <optional>

#include "mpa/logic/gml.hpp"
#include "mpa/model/enumerate.hpp"

namespace mpa {

struct ExtendabilityOptions {
  ExtensionCaps caps{2, 2};
  LabelSet alphabet;
  std::size_t budget = 1'000'000;
  MsoOracleOptions oracle{};
};

struct ExtendabilityResult {
  bool holds = true;
  std::size_t checked = 0;
  std::optional<RootedTree> counterexample;
};

/// Checks phi(root) on every enumerated extension of the k-prefix of `tree`.
/// Requires phi(root) on `tree` and k >= modal depth of a disjunct of
/// `witness` true at the root; throws Error otherwise and BudgetExceeded when
/// the extension count passes the budget.
ExtendabilityResult k_extendable_check(const RootedTree &tree, const MsoFormula &phi,
                                       std::size_t k, const OmegaGml &witness,
                                       const ExtendabilityOptions &opts);

/// Same claim for a GML formula, with extensions grouped per depth-k node by
/// the truth values of all subformulas at that node (which is all the root's
/// value can depend on). One representative per class combination is checked
/// with gml_eval and, when `translation` is given, with mso_check.
ExtendabilityResult k_extendable_check_gml(const RootedTree &tree, const GmlFormula &psi,
                                           std::size_t k, const ExtendabilityOptions &opts,
                                           const MsoFormula *translation = nullptr);

}  // namespace mpa
