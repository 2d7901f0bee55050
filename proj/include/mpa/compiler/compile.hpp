//
// Project mpa - message-passing automata over labeled trees
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <map>
#include <optional>
#include <ostream>

#include "mpa/automata/cmpa.hpp"
#include "mpa/logic/gmsc.hpp"
#include "mpa/logic/mso.hpp"

namespace mpa {

/// A_Py: accepting once a node labeled with both P and y is seen below.
CmpaPtr atomic_Py(Symbol P, Symbol y);
/// A_Ryz over the edge relation (z a child of y).
CmpaPtr atomic_Ryz(Symbol y, Symbol z);
CmpaPtr atomic_eq(Symbol y, Symbol z);
/// Counts occurrences of each variable label in the explored prefix, clipped
/// at two. Accepts when every count is exactly one, rejects once any count
/// reaches two.
CmpaPtr properness(const std::vector<Symbol> &vars);

CmpaPtr exists_fo(const CmpaPtr &psi, Symbol y, std::size_t state_budget = kDefaultStateBudget,
                  bool reduce = false);
CmpaPtr exists_so(const CmpaPtr &psi, Symbol Y, std::size_t state_budget = kDefaultStateBudget,
                  bool reduce = false);

/// Fixed-point states of a deterministic carefree automaton at the root of
/// some tree, grouped by the root's label (projected onto the signature).
struct FixedPointSets {
  std::map<std::uint64_t, std::vector<StateId>> per_label;
  /// Number of distinct aggregates visited by the closure.
  std::size_t aggregates = 0;

  const std::vector<StateId> &at(LabelSet P) const;
};

/// Least family closed under Q_P ∋ delta_P(M) for every multiset M over the
/// union of all Q_P (M = ∅ gives the leaves). An internal node's fixed point
/// is delta of its children's fixed points, so this is exactly the set of
/// fixed points reachable at roots of finite trees.
///
/// With a point symbol, labels containing it are closed only over children
/// whose labels avoid it: the point labels one node, the root.
FixedPointSets fixed_point_sets(const Cmpa &a, std::optional<Symbol> point = std::nullopt);

/// Same transitions and accepting states; init(P) = Q_P; no rejecting states.
CmpaPtr to_omnipresent_nondet(const CmpaPtr &a, FixedPointSets sets);

/// Determinization in omnipresent mode, read with standard acceptance.
CmpaPtr finalize(const CmpaPtr &nondet, std::size_t state_budget = kDefaultStateBudget);

inline constexpr std::size_t kStatsExploreCap = 2000;

struct StageStats {
  std::string stage;
  std::size_t materialized_states = 0;
  /// States reachable over all trees. Only filled by measure_reachable;
  /// `reachable_truncated` means it gave up.
  std::optional<std::size_t> reachable_states;
  bool reachable_truncated = false;
  SatCount formal_states;
  SatCount bound;
  double seconds = 0;
};

struct CompileOptions {
  /// Variable interpreted as the evaluation root.
  std::string point = "x";
  /// 1: fixed-point automaton only. 3: also the omnipresent and final stages.
  int stages = 1;
  /// Build stages 2-3 from the minimized structural automaton instead of the
  /// literal one. Without it nested quantifiers make the fixed-point sets
  /// intractable.
  bool reduce_final = true;
  std::size_t state_budget = kDefaultStateBudget;
};

struct CompilationUnit {
  MsoFormula formula;
  /// Proposition symbols read by the automata.
  LabelSet signature;
  /// Labels standing for free variables, point included.
  LabelSet variable_symbols;
  std::optional<Symbol> point;
  CmpaPtr fixed_point;
  /// Automaton the later stages start from: `fixed_point` itself or its
  /// bottom-up minimized counterpart.
  CmpaPtr reduced;
  CmpaPtr omnipresent;
  CmpaPtr final_automaton;
  std::optional<FixedPointSets> sets;
  std::vector<StageStats> stats;

  /// Labels a model needs so that the automata see the interpretation of the
  /// point at `root`.
  KripkeModel pointed(const KripkeModel &m, NodeId root) const;
};

/// Stage-1 structural compilation (and stages 2-3 when asked). Stages 2-3
/// are only meaningful for formulas equivalent to an omega-GML formula; that
/// is the caller's responsibility.
CompilationUnit compile_mso(const MsoFormula &phi, const CompileOptions &opts = {});

/// Adds stages 2-3 to a unit compiled with stages = 1.
void compile_final_stages(CompilationUnit &unit, std::size_t state_budget = kDefaultStateBudget,
                          bool reduce = true);

/// Fills StageStats::reachable_states for the deterministic stages, giving up
/// past kStatsExploreCap states or five times as many transitions.
void measure_reachable(CompilationUnit &unit);

/// The automaton for a subformula with every free variable as a label. With
/// `reduce`, every product and power-set step is followed by `minimize`.
CmpaPtr compile_formula(const MsoFormula &phi, std::size_t state_budget = kDefaultStateBudget,
                        bool reduce = false);

/// Text report: one line per stage with states, bound and elapsed time.
void write_stats(std::ostream &out, const CompilationUnit &unit);

/// Non-forgetful automaton simulating a GMSC program. One program round may
/// take several automaton rounds when bodies nest diamonds; acceptance (some
/// round, some appointed predicate) is unaffected.
CmpaPtr compile_gmsc(const GmscProgram &program, std::size_t state_budget = kDefaultStateBudget);

}  // namespace mpa
