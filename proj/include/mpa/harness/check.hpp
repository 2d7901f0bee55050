//
// Project mpa - message-passing automata over labeled trees
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <functional>
#include <iosfwd>
#include <optional>

#include "mpa/automata/run.hpp"
#include "mpa/compiler/compile.hpp"
#include "mpa/model/tree.hpp"

namespace mpa {

enum class Stage { FixedPoint, Omnipresent, Final };
Stage parse_stage(const std::string &text);
std::string to_string(Stage s);

struct CheckCase {
  std::string tree;
  std::string formula_id;
  bool oracle = false;
  Verdict verdict = Verdict::Neither;
  /// Rounds until the run at the root repeats (deterministic automata).
  std::size_t rounds = 0;
  bool agree = false;
};

struct CheckReport {
  std::vector<CheckCase> cases;
  std::size_t agree = 0, disagree = 0, neither = 0;
  std::optional<CheckCase> first_counterexample;

  void add(CheckCase c);
  void merge(const CheckReport &other);
  bool ok() const { return disagree == 0; }
  /// Summary lines followed by the first counterexample, if any.
  void write_summary(std::ostream &out) const;
  /// One line per case, header `tree\tformula\toracle\tverdict\trounds\tagree`.
  void write_tsv(std::ostream &out) const;
};

struct CheckOptions {
  Stage stage = Stage::FixedPoint;
  bool parallel = true;
  /// Negate the automaton under test; the harness must then report
  /// disagreements.
  bool inject_swap = false;
  DecideOptions decide;
};

/// The automaton of `unit` for `stage` (built on demand for the later stages).
CmpaPtr stage_automaton(CompilationUnit &unit, Stage stage, std::size_t state_budget);

/// Oracle vs automaton at the root of every tree. Fixed-point checks need
/// an exact Accept/Reject verdict; the omnipresent and final stages only
/// distinguish Accept from the rest. Cases come out in the order of `trees`
/// whether or not the sweep runs in parallel.
CheckReport check_against_oracle(const CompilationUnit &unit, const Cmpa &automaton,
                                 const std::string &formula_id,
                                 const std::vector<RootedTree> &trees,
                                 const std::function<bool(const RootedTree &)> &oracle,
                                 const CheckOptions &opts = {});

}  // namespace mpa
