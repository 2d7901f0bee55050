//
// Project mpa - message-passing automata over labeled trees
// SPDX-License-Identifier: Apache-2.0
//

#include "mpa/automata/combinators.hpp"

#include <algorithm>

namespace mpa {
namespace {

std::pair<std::uint32_t, std::uint32_t> unpack(std::uint64_t v) {
  return {static_cast<std::uint32_t>(v >> 32), static_cast<std::uint32_t>(v)};
}

template <typename T>
void sort_unique(std::vector<T> &v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

}  // namespace

NegateCmpa::NegateCmpa(CmpaPtr inner)
    : Cmpa(inner->signature(), inner->deterministic(), inner->forgetful(), inner->bound(),
           inner->formal_states()),
      inner_(std::move(inner)) {}

CmpaPtr negate(const CmpaPtr &a) {
  if (auto n = std::dynamic_pointer_cast<const NegateCmpa>(a)) return n->inner();
  return std::make_shared<const NegateCmpa>(a);
}

ProductCmpa::ProductCmpa(CmpaPtr a, CmpaPtr b, ProductMode mode, std::size_t state_budget)
    : Cmpa(a->signature() | b->signature(), a->deterministic() && b->deterministic(),
           a->forgetful(), max(a->bound(), b->bound()),
           a->formal_states() * b->formal_states()),
      a_(std::move(a)), b_(std::move(b)), mode_(mode),
      states_(state_budget, "product"), aggs_(4 * state_budget, "product aggregates") {
  if (a_->forgetful() != b_->forgetful())
    throw Error("product: factors disagree on forgetfulness");
  empty_ = aggs_.intern(detail::pack(a_->agg_empty(), b_->agg_empty()));
}

std::vector<StateId> ProductCmpa::init(LabelSet P) const {
  std::vector<StateId> out;
  for (auto q1 : a_->init(P & a_->signature()))
    for (auto q2 : b_->init(P & b_->signature())) out.push_back(states_.intern(detail::pack(q1, q2)));
  return out;
}

AggId ProductCmpa::agg_add(AggId g, StateId q) const {
  auto [g1, g2] = unpack(aggs_.get(g));
  auto [q1, q2] = unpack(states_.get(q));
  return aggs_.intern(detail::pack(a_->agg_add(g1, q1), b_->agg_add(g2, q2)));
}

StateId ProductCmpa::apply(LabelSet P, StateId self, AggId g) const {
  auto [g1, g2] = unpack(aggs_.get(g));
  StateId s1 = 0, s2 = 0;
  if (!forgetful_) std::tie(s1, s2) = unpack(states_.get(self));
  return states_.intern(detail::pack(a_->apply(P & a_->signature(), s1, g1),
                                     b_->apply(P & b_->signature(), s2, g2)));
}

std::pair<StateId, StateId> ProductCmpa::components(StateId q) const {
  return unpack(states_.get(q));
}

bool ProductCmpa::accepting(StateId q) const {
  auto [q1, q2] = components(q);
  return a_->accepting(q1) && b_->accepting(q2);
}

bool ProductCmpa::rejecting(StateId q) const {
  auto [q1, q2] = components(q);
  if (mode_ == ProductMode::ProperConcat) return a_->rejecting(q1) && b_->accepting(q2);
  return a_->rejecting(q1) || b_->rejecting(q2);
}

std::string ProductCmpa::state_name(StateId q) const {
  auto [q1, q2] = components(q);
  return "(" + a_->state_name(q1) + "," + b_->state_name(q2) + ")";
}

CmpaPtr product(const CmpaPtr &a, const CmpaPtr &b, ProductMode mode,
                std::size_t state_budget) {
  return std::make_shared<const ProductCmpa>(a, b, mode, state_budget);
}

PowersetCmpa::PowersetCmpa(CmpaPtr inner, std::optional<Symbol> guess, PowersetMode mode,
                           std::size_t state_budget)
    : Cmpa(guess ? inner->signature().without(*guess) : inner->signature(), true, true,
           inner->bound() * inner->formal_states(), SatCount::pow2(inner->formal_states())),
      inner_(std::move(inner)), guess_(guess), mode_(mode),
      states_(state_budget, "power set"), aggs_(4 * state_budget, "power-set aggregates") {
  if (!inner_->forgetful()) throw Error("power-set construction needs a forgetful automaton");
  empty_ = aggs_.intern({inner_->agg_empty()});
}

StateId PowersetCmpa::state_of(std::vector<StateId> members) const {
  sort_unique(members);
  return states_.intern(members);
}

std::vector<StateId> PowersetCmpa::init(LabelSet P) const {
  P = P & signature_;
  auto m = inner_->init(P);
  if (guess_) {
    auto more = inner_->init(P.with(*guess_));
    m.insert(m.end(), more.begin(), more.end());
  }
  return {state_of(std::move(m))};
}

AggId PowersetCmpa::agg_add(AggId g, StateId q) const {
  return add_memo_.get_or_compute(detail::pack(g, q), [&] {
    const auto &xs = aggs_.get(g);
    const auto &ss = states_.get(q);
    std::vector<AggId> out;
    out.reserve(xs.size() * ss.size());
    for (auto x : xs)
      for (auto s : ss) out.push_back(inner_->agg_add(x, s));
    sort_unique(out);
    return aggs_.intern(out);
  });
}

StateId PowersetCmpa::apply(LabelSet P, StateId, AggId g) const {
  P = P & signature_;
  return apply_memo_.get_or_compute(detail::ApplyKey{P.bits(), 0, g}, [&] {
    std::vector<StateId> m;
    for (auto x : aggs_.get(g)) {
      m.push_back(inner_->apply(P, 0, x));
      if (guess_) m.push_back(inner_->apply(P.with(*guess_), 0, x));
    }
    return state_of(std::move(m));
  });
}

bool PowersetCmpa::accepting(StateId q) const {
  const auto &m = states_.get(q);
  auto acc = [&](StateId s) { return inner_->accepting(s); };
  if (mode_ == PowersetMode::Existential) return std::any_of(m.begin(), m.end(), acc);
  return std::all_of(m.begin(), m.end(), acc);
}

bool PowersetCmpa::rejecting(StateId q) const {
  const auto &m = states_.get(q);
  auto acc = [&](StateId s) { return inner_->accepting(s); };
  auto rej = [&](StateId s) { return inner_->rejecting(s); };
  if (mode_ == PowersetMode::Existential)
    return std::none_of(m.begin(), m.end(), acc) && std::any_of(m.begin(), m.end(), rej);
  return std::all_of(m.begin(), m.end(), rej);
}

std::string PowersetCmpa::state_name(StateId q) const {
  std::vector<std::string> names;
  for (auto s : states_.get(q)) names.push_back(inner_->state_name(s));
  std::sort(names.begin(), names.end());
  std::string out = "{";
  for (std::size_t i = 0; i < names.size(); ++i) out += (i ? "," : "") + names[i];
  return out + "}";
}

std::string PowersetCmpa::kind() const {
  std::string m = mode_ == PowersetMode::Existential ? "existential" : "omnipresent";
  if (guess_) return "guess(" + symbol_name(*guess_) + ")," + m;
  return "determinize," + m;
}

CmpaPtr powerset(const CmpaPtr &inner, std::optional<Symbol> guess, PowersetMode mode,
                 std::size_t state_budget) {
  return std::make_shared<const PowersetCmpa>(inner, guess, mode, state_budget);
}

}  // namespace mpa
