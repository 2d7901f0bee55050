//
// Project mpa - message-passing automata over labeled trees
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "mpa/automata/cmpa.hpp"
#include "mpa/model/tree.hpp"

namespace mpa {

/// Global configuration: one state per node.
using Config = std::vector<StateId>;

/// Round-0 configuration. `choice[v]` indexes into init(label(v)); it must be
/// given for nondeterministic automata with several options somewhere.
Config initial_config(const Cmpa &a, const KripkeModel &m,
                      const std::vector<std::size_t> *choice = nullptr);

/// One synchronous round, node by node.
Config step_serial(const Cmpa &a, const KripkeModel &m, const Config &g);
/// Same round with nodes distributed over OpenMP threads.
Config step_parallel(const Cmpa &a, const KripkeModel &m, const Config &g);

struct RunTrace {
  std::vector<Config> rounds;
  /// First t with rounds[t+1] == rounds[t].
  std::optional<std::size_t> stabilized_at;
  /// When set, the configuration after the last round equals rounds[*cycle_start].
  std::optional<std::size_t> cycle_start;
  std::vector<std::size_t> init_choice;

  /// State of node v at any round t, following the detected cycle past the
  /// recorded rounds. Requires cycle_start.
  StateId at(std::size_t t, NodeId v) const;
};

class HorizonExceeded : public Error {
 public:
  HorizonExceeded(const std::string &what, RunTrace partial)
      : Error(what), partial_(std::move(partial)) {}
  const RunTrace &partial() const noexcept { return partial_; }

 private:
  RunTrace partial_;
};

struct RunOptions {
  std::size_t max_rounds = 10'000;
  bool parallel = false;
  /// Throw HorizonExceeded when neither a cycle nor max_rounds stops the run
  /// before the limit. When false the partial trace is returned.
  bool throw_on_horizon = true;
  const std::vector<std::size_t> *init_choice = nullptr;
};

/// Runs until the global configuration repeats (stabilization is the
/// period-one case) or max_rounds rounds have been computed.
RunTrace run(const Cmpa &a, const KripkeModel &m, const RunOptions &opts = {});

enum class Verdict { Accept, Reject, Neither };
std::string to_string(Verdict v);

struct Acceptance {
  enum class Kind { Standard, FixedPoint, Omnipresent };
  Kind kind = Kind::Standard;
  /// Omnipresent only: the round to check; empty means "some round".
  std::optional<std::size_t> round;

  static Acceptance standard() { return {Kind::Standard, std::nullopt}; }
  static Acceptance fixed_point() { return {Kind::FixedPoint, std::nullopt}; }
  static Acceptance omnipresent(std::optional<std::size_t> k = std::nullopt) {
    return {Kind::Omnipresent, k};
  }
};

struct DecideOptions {
  std::size_t max_rounds = 10'000;
  /// Largest number of initial-choice vectors enumerated for
  /// nondeterministic automata.
  std::size_t max_runs = 1u << 20;
  bool parallel = false;
};

/// Tri-state acceptance at `node`. Nondeterministic automata are decided by
/// enumerating every initial-choice vector. Throws Undecidable when a run
/// does not cycle within max_rounds and BudgetExceeded when there are more
/// than max_runs choice vectors.
Verdict decide(const Cmpa &a, const KripkeModel &m, NodeId node, Acceptance cond,
               const DecideOptions &opts = {});

/// States `node` can be in at round t over all initial-choice vectors. For
/// forgetful automata only the nodes at walk distance exactly t influence
/// that state, so only their choices are enumerated.
std::vector<StateId> states_at_round(const Cmpa &a, const KripkeModel &m, NodeId node,
                                     std::size_t t, const DecideOptions &opts = {});

/// Number of initial-choice vectors (saturating).
SatCount count_runs(const Cmpa &a, const KripkeModel &m);
/// Calls `visit` with every choice vector and its complete trace.
void for_each_run(const Cmpa &a, const KripkeModel &m, const DecideOptions &opts,
                  const std::function<void(const RunTrace &)> &visit);

struct QuasiAcyclicReport {
  bool pass = true;
  std::size_t models_checked = 0;
  std::string counterexample;
};

/// Scans every run on every model for a node that returns to a state it had
/// left. `describe` renders a model for the counterexample text.
QuasiAcyclicReport check_quasi_acyclic(
    const Cmpa &a, const std::vector<KripkeModel> &corpus, const DecideOptions &opts = {},
    const std::function<std::string(std::size_t)> &describe = nullptr);

/// True when some node revisits a state it left, following the cycle once.
bool revisits_left_state(const RunTrace &trace, std::size_t nodes, NodeId *where = nullptr);

/// TSV with header `round\tnode\tstate_debug_name`.
void write_trace_tsv(std::ostream &out, const Cmpa &a, const RunTrace &trace);

/// JSON-like description: kind, flags, bound, materialized states with
/// accepting/rejecting membership. Transitions are not serialized.
void write_description(std::ostream &out, const Cmpa &a);

}  // namespace mpa
