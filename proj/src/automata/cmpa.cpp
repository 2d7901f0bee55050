//
// Project mpa - message-passing automata over labeled trees
// SPDX-License-Identifier: Apache-2.0
//

#include "mpa/automata/cmpa.hpp"

namespace mpa {

StateId Cmpa::delta(LabelSet P, StateId self, const Multiset<StateId> &children) const {
  AggId g = agg_empty();
  for (auto &[q, n] : children) {
    // Aggregates are capped, so adding past saturation is a no-op; stop early.
    for (Multiset<StateId>::Count i = 0; i < n; ++i) {
      AggId next = agg_add(g, q);
      if (next == g) break;
      g = next;
    }
  }
  return apply(P, self, g);
}

AggId Cmpa::aggregate(const std::vector<StateId> &children) const {
  AggId g = agg_empty();
  for (auto q : children) g = agg_add(g, q);
  return g;
}

}  // namespace mpa
