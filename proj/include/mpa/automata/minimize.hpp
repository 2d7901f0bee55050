//
// Project mpa - message-passing automata over labeled trees
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include "mpa/automata/cmpa.hpp"

namespace mpa {

struct MinimizeStats {
  std::size_t reachable_states = 0;
  std::size_t reachable_aggregates = 0;
  std::size_t state_classes = 0;
  std::size_t aggregate_classes = 0;
};

/// States reachable from the initial states of every label through any
/// aggregate of reachable states (an over-approximation of the states that
/// occur in runs), and those aggregates. Deterministic automata only.
struct ReachableSpace {
  std::vector<StateId> states;
  std::vector<AggId> aggregates;
};
/// `pair_budget` bounds the aggregate-state pairs examined; 0 means no bound.
ReachableSpace explore(const Cmpa &a, std::size_t state_budget = kDefaultStateBudget,
                       std::size_t pair_budget = 0);

/// Quotient of a deterministic forgetful automaton by the coarsest
/// congruence that keeps accepting and rejecting states apart: states are
/// merged when every aggregate they can join behaves alike, aggregates when
/// every label and every later child treats them alike. Explores all states
/// reachable from the initial states of every label, so it is only usable
/// when that space fits the budget. Runs of the quotient are the images of
/// the original runs, which preserves all three acceptance conditions.
CmpaPtr minimize(const CmpaPtr &a, std::size_t state_budget = kDefaultStateBudget,
                 MinimizeStats *stats = nullptr);

}  // namespace mpa
