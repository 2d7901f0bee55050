//
// Project mpa - message-passing automata over labeled trees
// SPDX-License-Identifier: Apache-2.0
//

#include "mpa/automata/run.hpp"

#include <algorithm>
#include <json.hpp>
#include <numeric>
#include <set>
#include <unordered_map>

#include "mpa/detail/intern.hpp"

namespace mpa {

Config initial_config(const Cmpa &a, const KripkeModel &m,
                      const std::vector<std::size_t> *choice) {
  Config g(m.size());
  for (std::size_t v = 0; v < m.size(); ++v) {
    auto opts = a.init(m.labels[v]);
    std::size_t c = choice ? choice->at(v) : 0;
    if (!choice && opts.size() > 1)
      throw Error("nondeterministic initialization needs a choice vector");
    g[v] = opts.at(c);
  }
  return g;
}

namespace {

StateId node_update(const Cmpa &a, const KripkeModel &m, const Config &g, std::size_t v) {
  AggId agg = a.agg_empty();
  for (auto u : m.successors[v]) agg = a.agg_add(agg, g[u]);
  return a.apply(m.labels[v], g[v], agg);
}

}  // namespace

Config step_serial(const Cmpa &a, const KripkeModel &m, const Config &g) {
  Config out(m.size());
  for (std::size_t v = 0; v < m.size(); ++v) out[v] = node_update(a, m, g, v);
  return out;
}

Config step_parallel(const Cmpa &a, const KripkeModel &m, const Config &g) {
  Config out(m.size());
  const auto n = static_cast<std::ptrdiff_t>(m.size());
  // Exceptions cannot cross the OpenMP region boundary.
  std::exception_ptr error;
#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t v = 0; v < n; ++v) {
    try {
      out[v] = node_update(a, m, g, static_cast<std::size_t>(v));
    } catch (...) {
#pragma omp critical(mpa_step_error)
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
  return out;
}

StateId RunTrace::at(std::size_t t, NodeId v) const {
  if (t < rounds.size()) return rounds[t][v];
  if (!cycle_start) throw Error("RunTrace::at past an incomplete trace");
  std::size_t period = rounds.size() - *cycle_start;
  return rounds[*cycle_start + (t - *cycle_start) % period][v];
}

RunTrace run(const Cmpa &a, const KripkeModel &m, const RunOptions &opts) {
  RunTrace trace;
  if (opts.init_choice) trace.init_choice = *opts.init_choice;
  trace.rounds.push_back(initial_config(a, m, opts.init_choice));
  std::unordered_map<Config, std::size_t, detail::VectorHash> seen;
  seen.emplace(trace.rounds.back(), 0);
  while (true) {
    if (trace.rounds.size() > opts.max_rounds) {
      if (opts.throw_on_horizon)
        throw HorizonExceeded("run: no repeated configuration within " +
                                  std::to_string(opts.max_rounds) + " rounds",
                              trace);
      return trace;
    }
    const Config &last = trace.rounds.back();
    Config next = opts.parallel ? step_parallel(a, m, last) : step_serial(a, m, last);
    if (next == last) {
      trace.stabilized_at = trace.rounds.size() - 1;
      trace.cycle_start = trace.rounds.size() - 1;
      return trace;
    }
    auto [it, fresh] = seen.emplace(next, trace.rounds.size());
    if (!fresh) {
      trace.cycle_start = it->second;
      return trace;
    }
    trace.rounds.push_back(std::move(next));
  }
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Accept:
      return "accept";
    case Verdict::Reject:
      return "reject";
    case Verdict::Neither:
      return "neither";
  }
  return "";
}

namespace {

struct RunOutcome {
  bool accepted = false;  // visits F at the node
  bool rejected = false;  // visits F' and never F
  bool fp_accepted = false;
  bool fp_rejected = false;
};

RunOutcome classify(const Cmpa &a, const RunTrace &tr, NodeId node) {
  RunOutcome o;
  bool any_rej = false;
  for (auto &g : tr.rounds) {
    o.accepted = o.accepted || a.accepting(g[node]);
    any_rej = any_rej || a.rejecting(g[node]);
  }
  o.rejected = any_rej && !o.accepted;
  StateId q = tr.rounds[*tr.cycle_start][node];
  bool constant = true;
  for (std::size_t t = *tr.cycle_start; t < tr.rounds.size(); ++t)
    constant = constant && tr.rounds[t][node] == q;
  if (constant) {
    o.fp_accepted = a.accepting(q);
    o.fp_rejected = a.rejecting(q);
  }
  return o;
}

RunTrace complete_run(const Cmpa &a, const KripkeModel &m, const DecideOptions &opts,
                      const std::vector<std::size_t> *choice) {
  RunOptions ro;
  ro.max_rounds = opts.max_rounds;
  ro.parallel = opts.parallel;
  ro.init_choice = choice;
  try {
    return run(a, m, ro);
  } catch (const HorizonExceeded &e) {
    throw Undecidable(e.what());
  }
}

std::vector<std::size_t> option_counts(const Cmpa &a, const KripkeModel &m) {
  std::vector<std::size_t> n(m.size());
  for (std::size_t v = 0; v < m.size(); ++v) n[v] = a.init(m.labels[v]).size();
  return n;
}

/// Odometer over choices for the nodes in `free_nodes`; others stay at 0.
void for_each_choice(const std::vector<std::size_t> &counts,
                     const std::vector<std::size_t> &free_nodes, std::size_t max_runs,
                     const std::function<void(const std::vector<std::size_t> &)> &visit) {
  SatCount total{1};
  for (auto v : free_nodes) total = total * SatCount{counts[v]};
  if (total.value > max_runs)
    throw BudgetExceeded("nondeterministic runs: " + total.to_string() +
                         " choice vectors exceed the cap of " + std::to_string(max_runs));
  std::vector<std::size_t> choice(counts.size(), 0);
  while (true) {
    visit(choice);
    std::size_t i = 0;
    while (i < free_nodes.size() && ++choice[free_nodes[i]] == counts[free_nodes[i]])
      choice[free_nodes[i++]] = 0;
    if (i == free_nodes.size()) return;
  }
}

std::vector<std::size_t> nodes_with_choices(const std::vector<std::size_t> &counts) {
  std::vector<std::size_t> out;
  for (std::size_t v = 0; v < counts.size(); ++v)
    if (counts[v] > 1) out.push_back(v);
  return out;
}

}  // namespace

SatCount count_runs(const Cmpa &a, const KripkeModel &m) {
  SatCount total{1};
  for (auto c : option_counts(a, m)) total = total * SatCount{c};
  return total;
}

void for_each_run(const Cmpa &a, const KripkeModel &m, const DecideOptions &opts,
                  const std::function<void(const RunTrace &)> &visit) {
  auto counts = option_counts(a, m);
  for_each_choice(counts, nodes_with_choices(counts), opts.max_runs,
                  [&](const std::vector<std::size_t> &choice) {
                    visit(complete_run(a, m, opts, &choice));
                  });
}

std::vector<StateId> states_at_round(const Cmpa &a, const KripkeModel &m, NodeId node,
                                     std::size_t t, const DecideOptions &opts) {
  auto counts = option_counts(a, m);
  std::vector<std::size_t> free_nodes;
  if (a.forgetful()) {
    // Nodes at the end of a walk of length exactly t.
    std::vector<char> frontier(m.size(), 0);
    frontier[node] = 1;
    for (std::size_t i = 0; i < t; ++i) {
      std::vector<char> next(m.size(), 0);
      for (std::size_t v = 0; v < m.size(); ++v)
        if (frontier[v])
          for (auto u : m.successors[v]) next[u] = 1;
      frontier.swap(next);
    }
    for (std::size_t v = 0; v < m.size(); ++v)
      if (frontier[v] && counts[v] > 1) free_nodes.push_back(v);
  } else {
    free_nodes = nodes_with_choices(counts);
  }
  std::set<StateId> states;
  for_each_choice(counts, free_nodes, opts.max_runs, [&](const std::vector<std::size_t> &c) {
    Config g = initial_config(a, m, &c);
    for (std::size_t i = 0; i < t; ++i)
      g = opts.parallel ? step_parallel(a, m, g) : step_serial(a, m, g);
    states.insert(g[node]);
  });
  return {states.begin(), states.end()};
}

namespace {

Verdict decide_omnipresent(const Cmpa &a, const KripkeModel &m, NodeId node,
                           std::optional<std::size_t> round, const DecideOptions &opts) {
  auto verdict_at = [&](std::size_t t, bool &acc, bool &rej) {
    auto qs = states_at_round(a, m, node, t, opts);
    acc = std::all_of(qs.begin(), qs.end(), [&](StateId q) { return a.accepting(q); });
    rej = std::all_of(qs.begin(), qs.end(), [&](StateId q) { return a.rejecting(q); });
  };
  if (round) {
    bool acc, rej;
    verdict_at(*round, acc, rej);
    return acc ? Verdict::Accept : rej ? Verdict::Reject : Verdict::Neither;
  }

  // Horizon: past the last round at which some choice can still matter, all
  // runs share one eventually periodic continuation.
  std::size_t horizon = 0;
  auto counts = option_counts(a, m);
  if (a.forgetful()) {
    std::vector<char> frontier(m.size(), 0);
    frontier[node] = 1;
    std::set<std::vector<char>> seen;
    for (std::size_t t = 0;; ++t) {
      bool any = false;
      for (std::size_t v = 0; v < m.size(); ++v) any = any || (frontier[v] && counts[v] > 1);
      if (any) horizon = t + 1;
      if (!seen.insert(frontier).second) break;
      if (t > opts.max_rounds) throw Undecidable("omnipresent: horizon search diverged");
      std::vector<char> next(m.size(), 0);
      for (std::size_t v = 0; v < m.size(); ++v)
        if (frontier[v])
          for (auto u : m.successors[v]) next[u] = 1;
      frontier.swap(next);
    }
  }
  // Whether choices keep mattering forever (a cycle reachable through
  // choice nodes) is handled by full enumeration below.
  bool cyclic_influence = false;
  if (a.forgetful()) {
    std::vector<char> frontier(m.size(), 0);
    frontier[node] = 1;
    for (std::size_t t = 0; t <= m.size() + 1; ++t) {
      std::vector<char> next(m.size(), 0);
      for (std::size_t v = 0; v < m.size(); ++v)
        if (frontier[v])
          for (auto u : m.successors[v]) next[u] = 1;
      frontier.swap(next);
    }
    for (std::size_t v = 0; v < m.size(); ++v)
      cyclic_influence = cyclic_influence || (frontier[v] && counts[v] > 1);
  }

  if (!a.forgetful() || cyclic_influence) {
    // All runs, each eventually periodic; scan to max(prefix) + lcm(period).
    std::vector<RunTrace> runs;
    for_each_run(a, m, opts, [&](const RunTrace &tr) { runs.push_back(tr); });
    std::size_t mu = 0, lcm = 1;
    for (auto &tr : runs) {
      mu = std::max(mu, *tr.cycle_start);
      lcm = std::lcm(lcm, tr.rounds.size() - *tr.cycle_start);
      if (lcm > opts.max_rounds) throw Undecidable("omnipresent: run periods too long");
    }
    bool any_rej = false;
    for (std::size_t t = 0; t < mu + lcm; ++t) {
      bool acc = true, rej = true;
      for (auto &tr : runs) {
        acc = acc && a.accepting(tr.at(t, node));
        rej = rej && a.rejecting(tr.at(t, node));
      }
      if (acc) return Verdict::Accept;
      any_rej = any_rej || rej;
    }
    return any_rej ? Verdict::Reject : Verdict::Neither;
  }

  bool any_rej = false;
  for (std::size_t t = 0; t < horizon; ++t) {
    bool acc, rej;
    verdict_at(t, acc, rej);
    if (acc) return Verdict::Accept;
    any_rej = any_rej || rej;
  }
  // From `horizon` on the state at `node` no longer depends on choices.
  std::vector<std::size_t> zero(m.size(), 0);
  auto tr = complete_run(a, m, opts, &zero);
  std::size_t period = tr.rounds.size() - *tr.cycle_start;
  std::size_t end = std::max(horizon, *tr.cycle_start) + period;
  for (std::size_t t = horizon; t < end; ++t) {
    StateId q = tr.at(t, node);
    if (a.accepting(q)) return Verdict::Accept;
    any_rej = any_rej || a.rejecting(q);
  }
  return any_rej ? Verdict::Reject : Verdict::Neither;
}

}  // namespace

Verdict decide(const Cmpa &a, const KripkeModel &m, NodeId node, Acceptance cond,
               const DecideOptions &opts) {
  if (node >= m.size()) throw UnknownNode("node " + std::to_string(node));
  if (cond.kind == Acceptance::Kind::Omnipresent)
    return decide_omnipresent(a, m, node, cond.round, opts);

  bool fp = cond.kind == Acceptance::Kind::FixedPoint;
  bool any_acc = false, any_rej = false;
  auto absorb = [&](const RunTrace &tr) {
    auto o = classify(a, tr, node);
    any_acc = any_acc || (fp ? o.fp_accepted : o.accepted);
    any_rej = any_rej || (fp ? o.fp_rejected : o.rejected);
  };
  if (a.deterministic()) {
    absorb(complete_run(a, m, opts, nullptr));
  } else {
    for_each_run(a, m, opts, absorb);
  }
  if (any_acc) return Verdict::Accept;
  return any_rej ? Verdict::Reject : Verdict::Neither;
}

bool revisits_left_state(const RunTrace &trace, std::size_t nodes, NodeId *where) {
  for (NodeId v = 0; v < nodes; ++v) {
    std::set<StateId> left;
    StateId prev = trace.rounds[0][v];
    std::size_t len = trace.rounds.size() + (trace.cycle_start ? 1 : 0);
    for (std::size_t t = 1; t < len; ++t) {
      StateId cur = t < trace.rounds.size() ? trace.rounds[t][v]
                                            : trace.rounds[*trace.cycle_start][v];
      if (cur != prev) {
        left.insert(prev);
        if (left.count(cur)) {
          if (where) *where = v;
          return true;
        }
        prev = cur;
      }
    }
  }
  return false;
}

QuasiAcyclicReport check_quasi_acyclic(const Cmpa &a, const std::vector<KripkeModel> &corpus,
                                       const DecideOptions &opts,
                                       const std::function<std::string(std::size_t)> &describe) {
  QuasiAcyclicReport rep;
  for (std::size_t i = 0; i < corpus.size() && rep.pass; ++i) {
    ++rep.models_checked;
    auto check = [&](const RunTrace &tr) {
      NodeId v = 0;
      if (rep.pass && revisits_left_state(tr, corpus[i].size(), &v)) {
        rep.pass = false;
        rep.counterexample = (describe ? describe(i) : "model " + std::to_string(i)) +
                             ", node " + std::to_string(v);
      }
    };
    if (a.deterministic())
      check(complete_run(a, corpus[i], opts, nullptr));
    else
      for_each_run(a, corpus[i], opts, check);
  }
  return rep;
}

void write_trace_tsv(std::ostream &out, const Cmpa &a, const RunTrace &trace) {
  out << "round\tnode\tstate_debug_name\n";
  for (std::size_t t = 0; t < trace.rounds.size(); ++t)
    for (std::size_t v = 0; v < trace.rounds[t].size(); ++v)
      out << t << '\t' << v << '\t' << a.state_name(trace.rounds[t][v]) << '\n';
}

void write_description(std::ostream &out, const Cmpa &a) {
  nlohmann::ordered_json j;
  j["kind"] = a.kind();
  j["deterministic"] = a.deterministic();
  j["forgetful"] = a.forgetful();
  j["bound"] = a.bound().to_string();
  j["formal_states"] = a.formal_states().to_string();
  j["signature"] = a.signature().names();
  std::vector<std::string> names, acc, rej;
  for (StateId q = 0; q < a.materialized_states(); ++q) {
    names.push_back(a.state_name(q));
    if (a.accepting(q)) acc.push_back(names.back());
    if (a.rejecting(q)) rej.push_back(names.back());
  }
  std::sort(names.begin(), names.end());
  std::sort(acc.begin(), acc.end());
  std::sort(rej.begin(), rej.end());
  j["materialized_states"] = names.size();
  j["states"] = names;
  j["accepting"] = acc;
  j["rejecting"] = rej;
  out << j.dump(2) << '\n';
}

}  // namespace mpa
