//
// Project mpa - message-passing automata over labeled trees
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <functional>
#include <set>
#include <unordered_map>

#include "mpa/automata/cmpa.hpp"
#include "mpa/detail/intern.hpp"

namespace mpa {

/// Automaton given by a finite state list and transition callbacks.
struct ExplicitSpec {
  std::vector<std::string> states;
  /// Symbols passed to init/delta; labels are projected onto this set.
  LabelSet signature;
  std::function<std::vector<StateId>(LabelSet)> init;
  /// Receives the children multiset already capped at `bound`.
  std::function<StateId(LabelSet, StateId self, const Multiset<StateId> &)> delta;
  std::uint64_t bound = 1;
  std::set<StateId> accepting;
  std::set<StateId> rejecting;
  bool forgetful = true;
  std::string kind = "explicit";
};

class ExplicitCmpa final : public Cmpa {
 public:
  explicit ExplicitCmpa(ExplicitSpec spec, bool deterministic = true);

  std::vector<StateId> init(LabelSet P) const override;
  AggId agg_empty() const override { return 0; }
  AggId agg_add(AggId agg, StateId child) const override;
  /// Number of aggregate classes, or 0 when aggregates are raw count vectors.
  std::size_t aggregate_classes() const { return minimized_ ? class_rep_.size() : 0; }
  StateId apply(LabelSet P, StateId self, AggId agg) const override;

  bool accepting(StateId q) const override { return spec_.accepting.count(q) > 0; }
  bool rejecting(StateId q) const override { return spec_.rejecting.count(q) > 0; }
  std::string state_name(StateId q) const override { return spec_.states.at(q); }
  std::size_t materialized_states() const override { return spec_.states.size(); }
  std::string kind() const override { return spec_.kind; }

  const ExplicitSpec &spec() const { return spec_; }

 private:
  using Counts = std::vector<std::pair<StateId, std::uint32_t>>;

  bool minimize();

  ExplicitSpec spec_;
  /// When the capped count vectors are few, aggregates are the classes of
  /// the coarsest congruence that no label and no later children can split:
  /// `class_add_[c * |Q| + q]` and one representative vector per class.
  bool minimized_ = false;
  std::vector<AggId> class_add_;
  std::vector<Counts> class_rep_;
  mutable detail::Interner<Counts, detail::PairVectorHash> aggs_;
  mutable detail::Memo<std::uint64_t, AggId> add_memo_;
  mutable detail::Memo<detail::ApplyKey, StateId, detail::ApplyKeyHash> apply_memo_;
};

std::shared_ptr<const ExplicitCmpa> make_explicit(ExplicitSpec spec, bool deterministic = true);

}  // namespace mpa
