//
// Project mpa - message-passing automata over labeled trees
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mpa/logic/gml.hpp"

namespace mpa {

/// Program X_i(0) :- phi_i; X_i :- psi_i; with appointed predicates.
struct GmscProgram {
  std::vector<std::string> variables;
  std::vector<GmlFormula> init_bodies;
  std::vector<GmlFormula> rule_bodies;
  std::vector<bool> appointed;

  std::size_t size() const { return variables.size(); }
  std::optional<std::size_t> index_of(const std::string &name) const;
  std::uint64_t appointed_mask() const;
  /// Largest diamond grade in any body (at least 1).
  std::uint64_t max_grade() const;
};

/// File format: `X(0) :- <gml>;`, `X :- <schema>;`, `appointed: X, Y;`.
/// Every variable needs both an initial and a rule body.
GmscProgram parse_gmsc(std::string_view text);
std::string to_string(const GmscProgram &p);

/// Per-node set of true variables, as a bitmask over program.variables.
using TruthConfig = std::vector<std::uint64_t>;

/// Round 0 when `prev` is null, otherwise the round after `prev`.
TruthConfig gmsc_eval_round(const KripkeModel &model, const GmscProgram &program,
                            const TruthConfig *prev);

struct GmscTrace {
  std::vector<TruthConfig> rounds;
  /// The configuration at rounds.size() equals rounds[cycle_start].
  std::size_t cycle_start = 0;
};

/// Iterates rounds until a global configuration repeats.
GmscTrace gmsc_trace(const KripkeModel &model, const GmscProgram &program);

bool gmsc_accepts(const KripkeModel &model, NodeId node, const GmscProgram &program);
inline bool gmsc_accepts(const RootedTree &tree, NodeId node, const GmscProgram &program) {
  return gmsc_accepts(tree.model(), node, program);
}

}  // namespace mpa
