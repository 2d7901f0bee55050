//
// Project mpa - message-passing automata over labeled trees
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "mpa/multiset.hpp"
#include "mpa/symbols.hpp"

namespace mpa {

using StateId = std::uint32_t;
/// Identifier of an aggregate: the information a transition keeps about the
/// multiset of children states received so far.
using AggId = std::uint32_t;

class Cmpa;
using CmpaPtr = std::shared_ptr<const Cmpa>;

/// Counting message-passing automaton with one transition function per label
/// set. States are materialized lazily and identified by dense ids that are
/// stable for the automaton's lifetime; names are derived from state content,
/// so two runs that materialize states in different orders print the same.
///
/// Transitions are evaluated by folding children into an aggregate
/// (agg_empty, agg_add) and then applying the label's function (apply).
/// delta() offers the multiset view on top of that.
///
/// All methods are safe to call concurrently.
class Cmpa {
 public:
  virtual ~Cmpa() = default;

  /// Symbols the automaton reads; other labels are ignored.
  LabelSet signature() const noexcept { return signature_; }
  bool deterministic() const noexcept { return deterministic_; }
  bool forgetful() const noexcept { return forgetful_; }
  /// Recorded bound k: delta_P(M) = delta_P(M|k). Saturates for towers.
  SatCount bound() const noexcept { return bound_; }
  /// Size of the formal state space (materialized states may be fewer).
  SatCount formal_states() const noexcept { return formal_states_; }

  /// Initial states for a node labeled P. Exactly one when deterministic.
  virtual std::vector<StateId> init(LabelSet P) const = 0;
  virtual AggId agg_empty() const = 0;
  virtual AggId agg_add(AggId agg, StateId child) const = 0;
  /// Transition for label P. `self` is ignored by forgetful automata.
  virtual StateId apply(LabelSet P, StateId self, AggId agg) const = 0;

  virtual bool accepting(StateId q) const = 0;
  virtual bool rejecting(StateId q) const = 0;
  virtual std::string state_name(StateId q) const = 0;
  virtual std::size_t materialized_states() const = 0;

  /// Short description of how the automaton was built, for reports.
  virtual std::string kind() const = 0;

  StateId delta(LabelSet P, StateId self, const Multiset<StateId> &children) const;
  AggId aggregate(const std::vector<StateId> &children) const;

 protected:
  Cmpa(LabelSet signature, bool deterministic, bool forgetful, SatCount bound,
       SatCount formal_states)
      : signature_(signature), deterministic_(deterministic), forgetful_(forgetful),
        bound_(bound), formal_states_(formal_states) {}

  LabelSet signature_;
  bool deterministic_;
  bool forgetful_;
  SatCount bound_;
  SatCount formal_states_;
};

/// Default cap on materialized states per automaton.
inline constexpr std::size_t kDefaultStateBudget = 200'000;

/// Capped multiset: every count clipped at k.
template <typename E>
Multiset<E> cap_multiset(const Multiset<E> &m, std::uint64_t k) {
  return m.capped(k);
}

}  // namespace mpa
