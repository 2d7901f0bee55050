//
// Project mpa - message-passing automata over labeled trees
// SPDX-License-Identifier: Apache-2.0
//

#include "mpa/automata/minimize.hpp"

#include <deque>
#include <map>
#include <unordered_map>
#include <unordered_set>

#include "mpa/errors.hpp"

namespace mpa {

namespace {

class QuotientCmpa final : public Cmpa {
 public:
  QuotientCmpa(const Cmpa &a, std::vector<std::string> names, std::vector<char> acc,
               std::vector<char> rej, std::unordered_map<std::uint64_t, StateId> init,
               std::vector<AggId> add, std::unordered_map<std::uint64_t, std::vector<StateId>> apply)
      : Cmpa(a.signature(), true, true, a.bound(), SatCount{static_cast<std::uint64_t>(names.size())}),
        kind_("minimized(" + a.kind() + ")"),
        names_(std::move(names)),
        acc_(std::move(acc)),
        rej_(std::move(rej)),
        init_(std::move(init)),
        add_(std::move(add)),
        apply_(std::move(apply)) {}

  std::vector<StateId> init(LabelSet P) const override {
    return {init_.at((P & signature_).bits())};
  }
  AggId agg_empty() const override { return 0; }
  AggId agg_add(AggId g, StateId q) const override { return add_[g * names_.size() + q]; }
  StateId apply(LabelSet P, StateId, AggId g) const override {
    return apply_.at((P & signature_).bits())[g];
  }
  bool accepting(StateId q) const override { return acc_[q]; }
  bool rejecting(StateId q) const override { return rej_[q]; }
  std::string state_name(StateId q) const override { return names_[q]; }
  std::size_t materialized_states() const override { return names_.size(); }
  std::string kind() const override { return kind_; }

 private:
  std::string kind_;
  std::vector<std::string> names_;
  std::vector<char> acc_, rej_;
  std::unordered_map<std::uint64_t, StateId> init_;
  std::vector<AggId> add_;
  std::unordered_map<std::uint64_t, std::vector<StateId>> apply_;
};

/// Assigns dense class ids to keys in order of first appearance.
template <typename Key>
std::size_t renumber(const std::vector<Key> &keys, std::vector<std::uint32_t> &cls) {
  std::map<Key, std::uint32_t> ids;
  cls.resize(keys.size());
  for (std::size_t i = 0; i < keys.size(); ++i)
    cls[i] = ids.try_emplace(keys[i], static_cast<std::uint32_t>(ids.size())).first->second;
  return ids.size();
}

}  // namespace

ReachableSpace explore(const Cmpa &a, std::size_t state_budget, std::size_t pair_budget) {
  if (!a.deterministic()) throw Error("explore needs a deterministic automaton");
  const auto labels = a.signature().subsets();
  ReachableSpace out;
  std::unordered_set<StateId> state_seen;
  std::unordered_set<AggId> agg_seen;
  std::deque<StateId> new_states;
  std::deque<AggId> new_aggs;
  std::vector<StateId> done_states;
  std::vector<AggId> done_aggs;
  auto reach_agg = [&](AggId g) {
    if (!agg_seen.insert(g).second) return;
    if (agg_seen.size() > 4 * state_budget)
      throw StateBudgetExceeded("explore: more than " + std::to_string(4 * state_budget) +
                                " reachable aggregates");
    new_aggs.push_back(g);
  };
  auto reach_state = [&](StateId q) {
    if (!state_seen.insert(q).second) return;
    if (state_seen.size() > state_budget)
      throw StateBudgetExceeded("explore: more than " + std::to_string(state_budget) +
                                " reachable states");
    new_states.push_back(q);
  };
  // Each (aggregate, state) pair is handled once, when the later of the two
  // is popped. Forgetful automata ignore the node's own state.
  std::size_t pairs = 0;
  auto pair = [&](AggId g, StateId q) {
    if (pair_budget && ++pairs > pair_budget)
      throw StateBudgetExceeded("explore: more than " + std::to_string(pair_budget) +
                                " transitions");
    reach_agg(a.agg_add(g, q));
    if (!a.forgetful())
      for (auto P : labels) reach_state(a.apply(P, q, g));
  };
  reach_agg(a.agg_empty());
  for (auto P : labels) reach_state(a.init(P).at(0));
  while (!new_aggs.empty() || !new_states.empty()) {
    if (!new_states.empty()) {
      StateId q = new_states.front();
      new_states.pop_front();
      for (std::size_t j = 0; j < done_aggs.size(); ++j) pair(done_aggs[j], q);
      done_states.push_back(q);
    } else {
      AggId g = new_aggs.front();
      new_aggs.pop_front();
      if (a.forgetful())
        for (auto P : labels) reach_state(a.apply(P, 0, g));
      for (std::size_t j = 0; j < done_states.size(); ++j) pair(g, done_states[j]);
      done_aggs.push_back(g);
    }
  }
  out.states = std::move(done_states);
  out.aggregates = std::move(done_aggs);
  return out;
}

CmpaPtr minimize(const CmpaPtr &ap, std::size_t state_budget, MinimizeStats *stats) {
  const Cmpa &a = *ap;
  if (!a.deterministic() || !a.forgetful())
    throw Error("minimize needs a deterministic forgetful automaton");
  const auto labels = a.signature().subsets();
  auto space = explore(a, state_budget);
  const auto &states = space.states;
  const auto &aggs = space.aggregates;
  std::unordered_map<StateId, std::uint32_t> state_ix;
  std::unordered_map<AggId, std::uint32_t> agg_ix;
  for (std::size_t i = 0; i < states.size(); ++i)
    state_ix[states[i]] = static_cast<std::uint32_t>(i);
  for (std::size_t i = 0; i < aggs.size(); ++i) agg_ix[aggs[i]] = static_cast<std::uint32_t>(i);

  const std::size_t ns = states.size(), na = aggs.size(), nl = labels.size();
  std::vector<std::uint32_t> add(na * ns), app(na * nl);
  for (std::size_t g = 0; g < na; ++g) {
    for (std::size_t s = 0; s < ns; ++s) add[g * ns + s] = agg_ix.at(a.agg_add(aggs[g], states[s]));
    for (std::size_t l = 0; l < nl; ++l) app[g * nl + l] = state_ix.at(a.apply(labels[l], 0, aggs[g]));
  }

  // Joint partition refinement.
  std::vector<std::uint32_t> scls, acls;
  std::vector<std::vector<std::uint32_t>> skeys(ns), akeys(na);
  for (std::size_t s = 0; s < ns; ++s)
    skeys[s] = {a.accepting(states[s]) ? 1u : 0u, a.rejecting(states[s]) ? 1u : 0u};
  std::size_t sc = renumber(skeys, scls), ac = 0;
  for (std::size_t g = 0; g < na; ++g) akeys[g].assign(1, 0);
  renumber(akeys, acls);
  while (true) {
    for (std::size_t g = 0; g < na; ++g) {
      auto &k = akeys[g];
      k.assign(1, acls[g]);
      for (std::size_t l = 0; l < nl; ++l) k.push_back(scls[app[g * nl + l]]);
      for (std::size_t s = 0; s < ns; ++s) k.push_back(acls[add[g * ns + s]]);
    }
    std::size_t ac2 = renumber(akeys, acls);
    for (std::size_t s = 0; s < ns; ++s) {
      auto &k = skeys[s];
      k.assign(1, scls[s]);
      for (std::size_t g = 0; g < na; ++g) k.push_back(acls[add[g * ns + s]]);
    }
    std::size_t sc2 = renumber(skeys, scls);
    if (sc2 == sc && ac2 == ac) break;
    sc = sc2;
    ac = ac2;
  }

  // Representatives: the first member of each class; the empty aggregate is
  // index 0, so its class is 0.
  std::vector<std::int64_t> srep(sc, -1), arep(ac, -1);
  for (std::size_t s = 0; s < ns; ++s)
    if (srep[scls[s]] < 0) srep[scls[s]] = static_cast<std::int64_t>(s);
  for (std::size_t g = 0; g < na; ++g)
    if (arep[acls[g]] < 0) arep[acls[g]] = static_cast<std::int64_t>(g);

  std::vector<std::string> names(sc);
  std::vector<char> acc(sc), rej(sc);
  for (std::size_t c = 0; c < sc; ++c) {
    StateId q = states[srep[c]];
    names[c] = a.state_name(q);
    acc[c] = a.accepting(q);
    rej[c] = a.rejecting(q);
  }
  std::unordered_map<std::uint64_t, StateId> init;
  for (auto P : labels) init[P.bits()] = scls[state_ix.at(a.init(P).at(0))];
  std::vector<AggId> qadd(ac * sc);
  for (std::size_t c = 0; c < ac; ++c)
    for (std::size_t d = 0; d < sc; ++d)
      qadd[c * sc + d] = acls[add[arep[c] * ns + srep[d]]];
  std::unordered_map<std::uint64_t, std::vector<StateId>> qapp;
  for (std::size_t l = 0; l < nl; ++l) {
    auto &row = qapp[labels[l].bits()];
    row.resize(ac);
    for (std::size_t c = 0; c < ac; ++c) row[c] = scls[app[arep[c] * nl + l]];
  }
  if (stats) *stats = {ns, na, sc, ac};
  return std::make_shared<const QuotientCmpa>(a, std::move(names), std::move(acc), std::move(rej),
                                              std::move(init), std::move(qadd), std::move(qapp));
}

}  // namespace mpa
