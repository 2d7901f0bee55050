//
// Project mpa - message-passing automata over labeled trees
// SPDX-License-Identifier: Apache-2.0
//

#include "mpa/automata/explicit.hpp"

#include <algorithm>
#include <map>

namespace mpa {

ExplicitCmpa::ExplicitCmpa(ExplicitSpec spec, bool deterministic)
    : Cmpa(spec.signature, deterministic, spec.forgetful, SatCount{spec.bound},
           SatCount{spec.states.size()}),
      spec_(std::move(spec)) {
  if (spec_.states.empty()) throw Error("explicit automaton needs at least one state");
  for (auto q : spec_.accepting)
    if (spec_.rejecting.count(q))
      throw Error("state " + spec_.states.at(q) + " is both accepting and rejecting");
  aggs_.intern({});
  minimized_ = minimize();
}

bool ExplicitCmpa::minimize() {
  const std::size_t n = spec_.states.size();
  const std::uint64_t radix = spec_.bound + 1;
  const auto labels = signature_.subsets();
  const std::size_t selves = forgetful_ ? 1 : n;
  constexpr std::size_t kLimit = std::size_t{1} << 20;
  std::size_t count = 1;
  for (std::size_t i = 0; i < n; ++i) {
    count *= radix;
    if (count > kLimit) return false;
  }
  if (count * labels.size() * selves > kLimit) return false;

  // Vector index: counts in mixed radix, state 0 least significant.
  auto counts_of = [&](std::size_t v) {
    Counts c;
    for (StateId q = 0; q < n; ++q, v /= radix)
      if (v % radix) c.emplace_back(q, static_cast<std::uint32_t>(v % radix));
    return c;
  };
  std::vector<std::size_t> place(n, 1);
  for (std::size_t q = 1; q < n; ++q) place[q] = place[q - 1] * radix;
  auto succ = [&](std::size_t v, StateId q) {
    return (v / place[q]) % radix + 1 < radix ? v + place[q] : v;
  };

  // Moore refinement: start from the transition outputs, split by the
  // classes reached when one more child arrives.
  std::vector<std::uint32_t> cls(count);
  auto renumber = [&](const std::vector<std::vector<std::uint32_t>> &keys) {
    std::map<std::vector<std::uint32_t>, std::uint32_t> ids;
    for (std::size_t v = 0; v < count; ++v)
      cls[v] = ids.try_emplace(keys[v], static_cast<std::uint32_t>(ids.size())).first->second;
    return ids.size();
  };
  std::vector<std::vector<std::uint32_t>> keys(count);
  for (std::size_t v = 0; v < count; ++v) {
    Multiset<StateId> m;
    for (auto &[q, c] : counts_of(v)) m.add(q, c);
    for (auto P : labels)
      for (StateId self = 0; self < selves; ++self) keys[v].push_back(spec_.delta(P, self, m));
  }
  std::size_t classes = renumber(keys);
  while (true) {
    for (std::size_t v = 0; v < count; ++v) {
      keys[v].assign(1, cls[v]);
      for (StateId q = 0; q < n; ++q) keys[v].push_back(cls[succ(v, q)]);
    }
    std::size_t next = renumber(keys);
    if (next == classes) break;
    classes = next;
  }

  // Renumber so that the empty vector (index 0) is class 0, in order of the
  // smallest member.
  std::vector<std::int64_t> order(classes, -1);
  class_rep_.clear();
  for (std::size_t v = 0; v < count; ++v)
    if (order[cls[v]] < 0) {
      order[cls[v]] = static_cast<std::int64_t>(class_rep_.size());
      class_rep_.push_back(counts_of(v));
    }
  class_add_.assign(classes * n, 0);
  for (std::size_t v = 0; v < count; ++v)
    for (StateId q = 0; q < n; ++q)
      class_add_[order[cls[v]] * n + q] = static_cast<AggId>(order[cls[succ(v, q)]]);
  return true;
}

std::vector<StateId> ExplicitCmpa::init(LabelSet P) const {
  auto qs = spec_.init(P & signature_);
  if (qs.empty()) throw Error("empty initial state set for " + P.to_string());
  if (deterministic_ && qs.size() != 1)
    throw Error("deterministic automaton with several initial states");
  for (auto q : qs)
    if (q >= spec_.states.size()) throw Error("initial state out of range");
  return qs;
}

AggId ExplicitCmpa::agg_add(AggId agg, StateId child) const {
  if (minimized_) return class_add_[agg * spec_.states.size() + child];
  return add_memo_.get_or_compute(detail::pack(agg, child), [&] {
    Counts c = aggs_.get(agg);
    auto it = std::lower_bound(c.begin(), c.end(), std::make_pair(child, std::uint32_t{0}));
    if (it != c.end() && it->first == child) {
      if (it->second < spec_.bound) ++it->second;
    } else if (spec_.bound > 0) {
      c.insert(it, {child, 1});
    }
    return aggs_.intern(c);
  });
}

StateId ExplicitCmpa::apply(LabelSet P, StateId self, AggId agg) const {
  P = P & signature_;
  detail::ApplyKey key{P.bits(), forgetful_ ? 0u : self, agg};
  return apply_memo_.get_or_compute(key, [&] {
    Multiset<StateId> m;
    for (auto &[q, n] : minimized_ ? class_rep_.at(agg) : aggs_.get(agg)) m.add(q, n);
    StateId r = spec_.delta(P, self, m);
    if (r >= spec_.states.size()) throw Error("transition produced an unknown state");
    return r;
  });
}

std::shared_ptr<const ExplicitCmpa> make_explicit(ExplicitSpec spec, bool deterministic) {
  return std::make_shared<const ExplicitCmpa>(std::move(spec), deterministic);
}

}  // namespace mpa
