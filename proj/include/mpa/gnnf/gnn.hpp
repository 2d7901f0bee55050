//
// Project mpa - message-passing automata over labeled trees
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>

#include "mpa/automata/cmpa.hpp"
#include "mpa/errors.hpp"
#include "mpa/gnnf/floats.hpp"
#include "mpa/model/tree.hpp"

namespace mpa {

using FVec = std::vector<FloatNum>;

/// Recurrent GNN over a floating-point system. `agg` only ever sees the
/// multiset of child vectors capped at `bound` (in a fixed sorted order), so
/// AGG(M) = AGG(M|k) holds by construction.
struct GnnF {
  std::shared_ptr<const FloatSystem> system;
  std::size_t dim = 0;
  LabelSet signature;
  std::size_t bound = 1;
  std::function<FVec(LabelSet)> init;
  std::function<FVec(const std::vector<FVec> &)> agg;
  std::function<FVec(const FVec &, const FVec &)> com;
  std::function<bool(const FVec &)> accepting;
  std::string kind = "generic";

  FVec step(const FVec &self, const std::vector<FVec> &children) const;
};

/// Distinct vectors of `m`, each repeated min(count, k) times, sorted.
std::vector<FVec> cap_vectors(std::vector<FVec> m, std::size_t k);

struct RSimpleParams {
  std::vector<FVec> C, A;  // d x d, row-major: row i is C[i]
  FVec b;
};

/// COM(x, y) = ReLU*(xC + yA + b); AGG sums element-wise, each coordinate
/// folded in increasing order of its values. Matrix products fold over the
/// row index in order.
GnnF make_rsimple(std::shared_ptr<const FloatSystem> sys, LabelSet signature, std::size_t bound,
                  std::function<FVec(LabelSet)> init, RSimpleParams params,
                  std::function<bool(const FVec &)> accepting);

/// Element-wise sum of the vectors, each coordinate in increasing order.
FVec sum_increasing(const FloatSystem &sys, std::size_t dim, const std::vector<FVec> &m);

struct GnnTrace {
  std::vector<std::vector<FVec>> rounds;
  std::optional<std::size_t> stabilized_at;
  std::optional<std::size_t> cycle_start;

  /// Vector at `node` in round t, extended periodically past the cycle.
  const FVec &at(std::size_t t, NodeId node) const;
};

class GnnHorizonExceeded : public Error {
 public:
  GnnHorizonExceeded(const std::string &what, GnnTrace partial)
      : Error(what), partial_(std::move(partial)) {}
  const GnnTrace &partial() const noexcept { return partial_; }

 private:
  GnnTrace partial_;
};

struct GnnRunOptions {
  std::size_t max_rounds = 10000;
  bool parallel = false;
};

std::vector<FVec> gnn_initial(const GnnF &g, const KripkeModel &m);
std::vector<FVec> gnn_step_serial(const GnnF &g, const KripkeModel &m,
                                  const std::vector<FVec> &config);
std::vector<FVec> gnn_step_parallel(const GnnF &g, const KripkeModel &m,
                                    const std::vector<FVec> &config);

/// Runs until the configuration repeats; throws GnnHorizonExceeded otherwise.
GnnTrace gnn_run(const GnnF &g, const KripkeModel &m, const GnnRunOptions &opts = {});
bool gnn_accepts(const GnnF &g, const KripkeModel &m, NodeId node,
                 const GnnRunOptions &opts = {});

/// TSV with columns round, node, vector (exact fractions, comma-separated).
void write_gnn_trace_tsv(std::ostream &out, const FloatSystem &sys, const GnnTrace &trace);

/// A deterministic bounded automaton as a GNN[F]. Coordinates: one bit per
/// signature symbol (copied through every round), then one-hot over the
/// reachable states.
struct EmbeddedAutomaton {
  GnnF gnn;
  CmpaPtr automaton;
  std::vector<Symbol> symbol_bits;  // symbol per leading coordinate
  std::vector<StateId> states;        // one-hot index -> automaton state

  /// The automaton state a feature vector encodes.
  StateId decode(const FVec &x) const;
  FVec encode(LabelSet P, StateId q) const;
};

/// `sys` defaults to FloatSystem::for_counts(bound); throws SystemTooSmall
/// if 0..bound are not exact there.
EmbeddedAutomaton embed_fcmpa(const CmpaPtr &a,
                              std::shared_ptr<const FloatSystem> sys = nullptr,
                              std::size_t state_budget = kDefaultStateBudget);

}  // namespace mpa
