//
// Project mpa - message-passing automata over labeled trees
// SPDX-License-Identifier: Apache-2.0
//

#include "mpa/gnnf/gnn.hpp"

#include <algorithm>
#include <exception>
#include <map>
#include <ostream>
#include <unordered_map>

#include "mpa/automata/minimize.hpp"

namespace mpa {

std::vector<FVec> cap_vectors(std::vector<FVec> m, std::size_t k) {
  std::sort(m.begin(), m.end());
  std::vector<FVec> out;
  for (std::size_t i = 0; i < m.size();) {
    std::size_t j = i;
    while (j < m.size() && m[j] == m[i]) ++j;
    for (std::size_t c = 0; c < std::min(j - i, k); ++c) out.push_back(m[i]);
    i = j;
  }
  return out;
}

FVec GnnF::step(const FVec &self, const std::vector<FVec> &children) const {
  return com(self, agg(cap_vectors(children, bound)));
}

FVec sum_increasing(const FloatSystem &sys, std::size_t dim, const std::vector<FVec> &m) {
  FVec out(dim, sys.zero());
  std::vector<std::pair<Rational, const FloatNum *>> column;
  for (std::size_t i = 0; i < dim; ++i) {
    column.clear();
    for (auto &v : m) column.emplace_back(sys.decode(v.at(i)), &v[i]);
    std::stable_sort(column.begin(), column.end(),
                     [](auto &a, auto &b) { return a.first < b.first; });
    FloatNum acc = sys.zero();
    for (auto &[value, x] : column) acc = sys.fsum(acc, *x);
    out[i] = acc;
  }
  return out;
}

GnnF make_rsimple(std::shared_ptr<const FloatSystem> sys, LabelSet signature, std::size_t bound,
                  std::function<FVec(LabelSet)> init, RSimpleParams params,
                  std::function<bool(const FVec &)> accepting) {
  const std::size_t d = params.b.size();
  if (params.C.size() != d || params.A.size() != d) throw Error("R-simple matrices must be d x d");
  for (std::size_t i = 0; i < d; ++i)
    if (params.C[i].size() != d || params.A[i].size() != d)
      throw Error("R-simple matrices must be d x d");
  sys->one();  // ReLU* needs 1 in the system

  GnnF g;
  g.system = sys;
  g.dim = d;
  g.signature = signature;
  g.bound = bound;
  g.init = std::move(init);
  g.accepting = std::move(accepting);
  g.kind = "r-simple";
  g.agg = [sys, d](const std::vector<FVec> &m) { return sum_increasing(*sys, d, m); };
  g.com = [sys, d, params = std::move(params)](const FVec &x, const FVec &y) {
    FVec out(d);
    for (std::size_t j = 0; j < d; ++j) {
      FloatNum xc = sys->zero(), ya = sys->zero();
      for (std::size_t i = 0; i < d; ++i) {
        xc = sys->fsum(xc, sys->fmul(x[i], params.C[i][j]));
        ya = sys->fsum(ya, sys->fmul(y[i], params.A[i][j]));
      }
      out[j] = sys->relu_star(sys->fsum(sys->fsum(xc, ya), params.b[j]));
    }
    return out;
  };
  return g;
}

const FVec &GnnTrace::at(std::size_t t, NodeId node) const {
  if (t < rounds.size()) return rounds[t].at(node);
  if (!cycle_start) throw Error("round beyond the computed trace");
  std::size_t period = rounds.size() - *cycle_start;
  return rounds[*cycle_start + (t - *cycle_start) % period].at(node);
}

std::vector<FVec> gnn_initial(const GnnF &g, const KripkeModel &m) {
  std::vector<FVec> out(m.size());
  for (NodeId v = 0; v < m.size(); ++v) {
    out[v] = g.init(m.labels[v] & g.signature);
    if (out[v].size() != g.dim) throw Error("initial vector has the wrong dimension");
  }
  return out;
}

namespace {

FVec update(const GnnF &g, const KripkeModel &m, const std::vector<FVec> &config, NodeId v) {
  std::vector<FVec> children;
  children.reserve(m.successors[v].size());
  for (auto c : m.successors[v]) children.push_back(config[c]);
  return g.step(config[v], children);
}

}  // namespace

std::vector<FVec> gnn_step_serial(const GnnF &g, const KripkeModel &m,
                                  const std::vector<FVec> &config) {
  std::vector<FVec> next(m.size());
  for (NodeId v = 0; v < m.size(); ++v) next[v] = update(g, m, config, v);
  return next;
}

std::vector<FVec> gnn_step_parallel(const GnnF &g, const KripkeModel &m,
                                    const std::vector<FVec> &config) {
  std::vector<FVec> next(m.size());
  std::exception_ptr failure;
  const auto n = static_cast<std::int64_t>(m.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (std::int64_t v = 0; v < n; ++v) {
    try {
      next[v] = update(g, m, config, static_cast<NodeId>(v));
    } catch (...) {
#pragma omp critical
      failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return next;
}

GnnTrace gnn_run(const GnnF &g, const KripkeModel &m, const GnnRunOptions &opts) {
  GnnTrace tr;
  std::map<std::vector<FVec>, std::size_t> seen;
  tr.rounds.push_back(gnn_initial(g, m));
  seen.emplace(tr.rounds.back(), 0);
  while (true) {
    if (tr.rounds.size() > opts.max_rounds)
      throw GnnHorizonExceeded(
          "no repeated configuration within " + std::to_string(opts.max_rounds) + " rounds", tr);
    auto next = opts.parallel ? gnn_step_parallel(g, m, tr.rounds.back())
                              : gnn_step_serial(g, m, tr.rounds.back());
    auto [it, fresh] = seen.emplace(next, tr.rounds.size());
    if (!fresh) {
      tr.cycle_start = it->second;
      if (it->second == tr.rounds.size() - 1) tr.stabilized_at = it->second;
      return tr;
    }
    tr.rounds.push_back(std::move(next));
  }
}

bool gnn_accepts(const GnnF &g, const KripkeModel &m, NodeId node, const GnnRunOptions &opts) {
  auto tr = gnn_run(g, m, opts);
  for (auto &round : tr.rounds)
    if (g.accepting(round.at(node))) return true;
  return false;
}

void write_gnn_trace_tsv(std::ostream &out, const FloatSystem &sys, const GnnTrace &trace) {
  out << "round\tnode\tvector\n";
  for (std::size_t t = 0; t < trace.rounds.size(); ++t)
    for (std::size_t v = 0; v < trace.rounds[t].size(); ++v) {
      out << t << '\t' << v << '\t';
      const auto &x = trace.rounds[t][v];
      for (std::size_t i = 0; i < x.size(); ++i)
        out << (i ? "," : "") << rational_string(sys.decode(x[i]));
      out << '\n';
    }
}

StateId EmbeddedAutomaton::decode(const FVec &x) const {
  const auto &sys = *gnn.system;
  const std::size_t s = symbol_bits.size();
  std::optional<StateId> hit;
  for (std::size_t j = 0; j < states.size(); ++j) {
    Rational v = sys.decode(x.at(s + j));
    if (v == 1) {
      if (hit) throw Error("feature vector is not one-hot");
      hit = states[j];
    } else if (v != 0) {
      throw Error("feature vector is not one-hot");
    }
  }
  if (!hit) throw Error("feature vector is not one-hot");
  return *hit;
}

FVec EmbeddedAutomaton::encode(LabelSet P, StateId q) const {
  const auto &sys = *gnn.system;
  FVec x(gnn.dim, sys.zero());
  for (std::size_t i = 0; i < symbol_bits.size(); ++i)
    if (P.contains(symbol_bits[i])) x[i] = sys.one();
  auto it = std::find(states.begin(), states.end(), q);
  if (it == states.end()) throw Error("state outside the embedded state space");
  x[symbol_bits.size() + (it - states.begin())] = sys.one();
  return x;
}

EmbeddedAutomaton embed_fcmpa(const CmpaPtr &a, std::shared_ptr<const FloatSystem> sys,
                              std::size_t state_budget) {
  if (!a->deterministic()) throw Error("embed_fcmpa needs a deterministic automaton");
  if (a->bound().saturated()) throw SystemTooSmall("automaton bound does not fit any system");
  const std::uint64_t k = std::max<std::uint64_t>(a->bound().value, 1);
  if (!sys) sys = std::make_shared<const FloatSystem>(FloatSystem::for_counts(k));
  for (std::uint64_t i = 0; i <= k; ++i)
    if (!sys->exact(Rational(i)))
      throw SystemTooSmall("integer " + std::to_string(i) + " is not exact in " + sys->describe());

  EmbeddedAutomaton e;
  e.automaton = a;
  e.symbol_bits = a->signature().symbols();
  e.states = explore(*a, state_budget).states;
  const std::size_t s = e.symbol_bits.size(), n = e.states.size();
  std::unordered_map<StateId, std::size_t> index;
  for (std::size_t j = 0; j < n; ++j) index[e.states[j]] = j;

  GnnF &g = e.gnn;
  g.system = sys;
  g.dim = s + n;
  g.signature = a->signature();
  g.bound = k;
  g.kind = "embedded(" + a->kind() + ")";
  const FloatNum kf = sys->nearest(Rational(k));
  g.agg = [sys, d = s + n, kf](const std::vector<FVec> &m) {
    FVec sum = sum_increasing(*sys, d, m);
    for (auto &x : sum)
      if (sys->decode(x) > sys->decode(kf)) x = kf;
    return sum;
  };
  auto symbols = e.symbol_bits;
  auto states = e.states;
  g.init = [a, symbols, states, index, sys, s, n](LabelSet P) {
    FVec x(s + n, sys->zero());
    for (std::size_t i = 0; i < s; ++i)
      if (P.contains(symbols[i])) x[i] = sys->one();
    x[s + index.at(a->init(P).at(0))] = sys->one();
    return x;
  };
  g.com = [a, symbols, states, index, sys, s, n](const FVec &x, const FVec &y) {
    LabelSet P;
    for (std::size_t i = 0; i < s; ++i)
      if (sys->decode(x[i]) == 1) P = P.with(symbols[i]);
    std::optional<std::size_t> self;
    AggId agg = a->agg_empty();
    for (std::size_t j = 0; j < n; ++j) {
      if (sys->decode(x[s + j]) == 1) self = j;
      auto count = static_cast<std::size_t>(
          boost::multiprecision::numerator(sys->decode(y[s + j])));
      for (std::size_t c = 0; c < count; ++c) agg = a->agg_add(agg, states[j]);
    }
    if (!self) throw Error("embedded GNN received a vector that is not one-hot");
    StateId next = a->apply(P, states[*self], agg);
    FVec out(s + n, sys->zero());
    for (std::size_t i = 0; i < s; ++i) out[i] = x[i];
    out[s + index.at(next)] = sys->one();
    return out;
  };
  g.accepting = [a, states, sys, s, n](const FVec &x) {
    for (std::size_t j = 0; j < n; ++j)
      if (sys->decode(x[s + j]) == 1) return a->accepting(states[j]);
    return false;
  };
  return e;
}

}  // namespace mpa
