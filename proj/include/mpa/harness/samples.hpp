//
// Project mpa - message-passing automata over labeled trees
// SPDX-License-Identifier: Apache-2.0
//

// Small hand-built automata used by the fuzzer, the tests and the
// acceptance run.

#pragma once

#include <map>
#include <set>

#include "mpa/automata/combinators.hpp"
#include "mpa/automata/explicit.hpp"
#include "mpa/automata/run.hpp"

namespace mpa::samples {

inline bool has(const Multiset<StateId> &m, StateId q) { return m.count(q) > 0; }

/// Two states: q_Py iff some node below (or the node itself) carries p and y.
inline CmpaPtr a_py() {
  ExplicitSpec s;
  s.states = {"q_Py", "q_!Py"};
  s.signature = LabelSet{"p", "x:y"};
  auto py = s.signature;
  s.init = [py](LabelSet P) { return std::vector<StateId>{P.contains_all(py) ? 0u : 1u}; };
  s.delta = [py](LabelSet P, StateId, const Multiset<StateId> &m) -> StateId {
    return P.contains_all(py) || has(m, 0) ? 0 : 1;
  };
  s.accepting = {0};
  s.rejecting = {1};
  s.kind = "A_Py";
  return make_explicit(std::move(s));
}

/// Guess at p-nodes whether to report "yes" right away or a neutral "g".
inline CmpaPtr guess_reach() {
  ExplicitSpec s;
  s.states = {"n", "y", "g"};
  s.signature = LabelSet{"p"};
  s.init = [](LabelSet P) {
    return P.empty() ? std::vector<StateId>{0} : std::vector<StateId>{1, 2};
  };
  s.delta = [](LabelSet P, StateId, const Multiset<StateId> &m) -> StateId {
    if (!P.empty() || has(m, 1)) return 1;
    return has(m, 2) ? 2 : 0;
  };
  s.accepting = {1};
  s.rejecting = {0};
  s.kind = "guess_reach";
  return make_explicit(std::move(s), false);
}

/// Counts p-nodes in the subtree up to two. A p-node may start low.
/// Transitions are monotone and never below the initial state, so every
/// node's sequence of states only increases.
inline CmpaPtr guess_count() {
  ExplicitSpec s;
  s.states = {"zero", "one", "two"};
  s.signature = LabelSet{"p"};
  s.bound = 2;
  s.init = [](LabelSet P) {
    return P.empty() ? std::vector<StateId>{0} : std::vector<StateId>{0, 1};
  };
  s.delta = [](LabelSet P, StateId, const Multiset<StateId> &m) -> StateId {
    auto n = m.count(1) + 2 * m.count(2) + (P.empty() ? 0 : 1);
    return n >= 2 ? 2 : static_cast<StateId>(n);
  };
  s.accepting = {2};
  s.rejecting = {0};
  s.kind = "guess_count";
  return make_explicit(std::move(s), false);
}

/// Four states ordered d < c < b < a; a node moves to the largest of its
/// base level and its children's levels, or to a when two children reach b.
inline CmpaPtr guess_mix() {
  ExplicitSpec s;
  s.states = {"a", "b", "c", "d"};
  s.signature = LabelSet{"p"};
  s.bound = 2;
  s.init = [](LabelSet P) {
    return P.empty() ? std::vector<StateId>{3, 2} : std::vector<StateId>{2, 1};
  };
  s.delta = [](LabelSet P, StateId, const Multiset<StateId> &m) -> StateId {
    StateId best = P.empty() ? 2 : 1;
    std::uint64_t high = 0;
    for (auto &[q, n] : m) {
      best = std::min(best, q);
      if (q <= 1) high += n;
    }
    return high >= 2 ? 0 : best;
  };
  s.accepting = {0};
  s.rejecting = {2};
  s.kind = "guess_mix";
  return make_explicit(std::move(s), false);
}

/// Non-forgetful: every node swaps between its two states each round.
inline CmpaPtr flip_flop() {
  ExplicitSpec s;
  s.states = {"on", "off"};
  s.signature = LabelSet{};
  s.forgetful = false;
  s.init = [](LabelSet) { return std::vector<StateId>{0}; };
  s.delta = [](LabelSet, StateId self, const Multiset<StateId> &) -> StateId {
    return 1 - self;
  };
  s.kind = "flip_flop";
  return make_explicit(std::move(s));
}

/// Node-by-node comparison of the run sets of `a` and the states of its
/// determinization `d` up to `horizon` rounds: the per-node sequences over
/// all initial choices of `a` must be exactly the sequences selectable
/// round by round from the sets `d` holds.
inline bool run_sets_equal(const Cmpa &a, const PowersetCmpa &d, const KripkeModel &m,
                           std::size_t horizon, std::string *why = nullptr) {
  DecideOptions opts;
  auto dtrace = run(d, m);
  for (NodeId v = 0; v < m.size(); ++v) {
    std::set<std::vector<StateId>> runs;
    for_each_run(a, m, opts, [&](const RunTrace &tr) {
      std::vector<StateId> seq;
      for (std::size_t t = 0; t < horizon; ++t) seq.push_back(tr.at(t, v));
      runs.insert(seq);
    });
    std::set<std::vector<StateId>> selectable{{}};
    for (std::size_t t = 0; t < horizon; ++t) {
      std::set<std::vector<StateId>> next;
      for (auto &prefix : selectable)
        for (auto q : d.members(dtrace.at(t, v))) {
          auto seq = prefix;
          seq.push_back(q);
          next.insert(seq);
        }
      selectable.swap(next);
    }
    if (runs != selectable) {
      if (why)
        *why = "node " + std::to_string(v) + ": " + std::to_string(runs.size()) +
               " run sequences vs " + std::to_string(selectable.size()) + " selectable";
      return false;
    }
  }
  return true;
}

}  // namespace mpa::samples
