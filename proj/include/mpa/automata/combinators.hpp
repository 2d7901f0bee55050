//
// Project mpa - message-passing automata over labeled trees
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <optional>

#include "mpa/automata/cmpa.hpp"
#include "mpa/detail/intern.hpp"

namespace mpa {

/// Accepting and rejecting states swapped; everything else shared.
class NegateCmpa final : public Cmpa {
 public:
  explicit NegateCmpa(CmpaPtr inner);

  std::vector<StateId> init(LabelSet P) const override { return inner_->init(P); }
  AggId agg_empty() const override { return inner_->agg_empty(); }
  AggId agg_add(AggId g, StateId q) const override { return inner_->agg_add(g, q); }
  StateId apply(LabelSet P, StateId self, AggId g) const override {
    return inner_->apply(P, self, g);
  }
  bool accepting(StateId q) const override { return inner_->rejecting(q); }
  bool rejecting(StateId q) const override { return inner_->accepting(q); }
  std::string state_name(StateId q) const override { return inner_->state_name(q); }
  std::size_t materialized_states() const override { return inner_->materialized_states(); }
  std::string kind() const override { return "negate"; }

  const CmpaPtr &inner() const { return inner_; }

 private:
  CmpaPtr inner_;
};

/// negate(negate(A)) returns A itself.
CmpaPtr negate(const CmpaPtr &a);

enum class ProductMode {
  /// F = F1 x F2, F' = (F'1 x Q2) u (Q1 x F'2).
  Conjunction,
  /// Second factor checks properness: F = F1 x F2, F' = F'1 x F2.
  ProperConcat,
};

/// Synchronous product; each factor sees its own signature's part of the label.
class ProductCmpa final : public Cmpa {
 public:
  ProductCmpa(CmpaPtr a, CmpaPtr b, ProductMode mode, std::size_t state_budget);

  std::vector<StateId> init(LabelSet P) const override;
  AggId agg_empty() const override { return empty_; }
  AggId agg_add(AggId g, StateId q) const override;
  StateId apply(LabelSet P, StateId self, AggId g) const override;
  bool accepting(StateId q) const override;
  bool rejecting(StateId q) const override;
  std::string state_name(StateId q) const override;
  std::size_t materialized_states() const override { return states_.size(); }
  std::string kind() const override {
    return mode_ == ProductMode::Conjunction ? "product" : "proper-concat";
  }

  std::pair<StateId, StateId> components(StateId q) const;
  const CmpaPtr &first() const { return a_; }
  const CmpaPtr &second() const { return b_; }

 private:
  CmpaPtr a_, b_;
  ProductMode mode_;
  mutable detail::Interner<std::uint64_t> states_;
  mutable detail::Interner<std::uint64_t> aggs_;
  AggId empty_;
};

CmpaPtr product(const CmpaPtr &a, const CmpaPtr &b,
                ProductMode mode = ProductMode::Conjunction,
                std::size_t state_budget = kDefaultStateBudget);

enum class PowersetMode {
  /// F' = sets meeting F, rejecting = sets missing F and meeting F'.
  Existential,
  /// F' = nonempty subsets of F, rejecting = nonempty subsets of F'.
  Omnipresent,
};

/// Power-set construction over a forgetful automaton. Each state is the set
/// of inner states reachable over all choices. With a guess symbol g, every
/// transition (and the initialization) is taken both with and without g in
/// the label, and g leaves the signature.
class PowersetCmpa final : public Cmpa {
 public:
  PowersetCmpa(CmpaPtr inner, std::optional<Symbol> guess, PowersetMode mode,
               std::size_t state_budget);

  std::vector<StateId> init(LabelSet P) const override;
  AggId agg_empty() const override { return empty_; }
  AggId agg_add(AggId g, StateId q) const override;
  StateId apply(LabelSet P, StateId self, AggId g) const override;
  bool accepting(StateId q) const override;
  bool rejecting(StateId q) const override;
  std::string state_name(StateId q) const override;
  std::size_t materialized_states() const override { return states_.size(); }
  std::string kind() const override;

  /// Inner states held by q, sorted.
  const std::vector<StateId> &members(StateId q) const { return states_.get(q); }
  const CmpaPtr &inner() const { return inner_; }
  std::optional<Symbol> guess() const { return guess_; }
  PowersetMode mode() const { return mode_; }

  /// The state holding exactly `members` (sorted and deduplicated here).
  StateId state_of(std::vector<StateId> members) const;

 private:
  CmpaPtr inner_;
  std::optional<Symbol> guess_;
  PowersetMode mode_;
  mutable detail::Interner<std::vector<StateId>, detail::VectorHash> states_;
  mutable detail::Interner<std::vector<AggId>, detail::VectorHash> aggs_;
  mutable detail::Memo<std::uint64_t, AggId> add_memo_;
  mutable detail::Memo<detail::ApplyKey, StateId, detail::ApplyKeyHash> apply_memo_;
  AggId empty_;
};

CmpaPtr powerset(const CmpaPtr &inner, std::optional<Symbol> guess, PowersetMode mode,
                 std::size_t state_budget = kDefaultStateBudget);

/// Determinization of a nondeterministic forgetful automaton.
inline CmpaPtr determinize(const CmpaPtr &a, PowersetMode mode = PowersetMode::Existential,
                           std::size_t state_budget = kDefaultStateBudget) {
  return powerset(a, std::nullopt, mode, state_budget);
}

}  // namespace mpa
