//
// Project mpa - message-passing automata over labeled trees
// SPDX-License-Identifier: Apache-2.0
//

#include <algorithm>

#include "mpa/automata/combinators.hpp"
#include "mpa/automata/explicit.hpp"
#include "mpa/automata/minimize.hpp"
#include "mpa/compiler/compile.hpp"

namespace mpa {

namespace {

// Display name of a label symbol without its "x:"/"X:" kind prefix.
std::string short_name(Symbol s) {
  const auto &n = symbol_name(s);
  auto colon = n.find(':');
  return colon == std::string::npos ? n : n.substr(colon + 1);
}

}  // namespace

CmpaPtr atomic_Py(Symbol P, Symbol y) {
  enum : StateId { kYes, kNo };
  ExplicitSpec s;
  std::string py = short_name(P) + "(" + short_name(y) + ")";
  s.states = {"q_" + py, "q_!" + py};
  s.signature = LabelSet::single(P).with(y);
  LabelSet both = s.signature;
  s.init = [both](LabelSet L) { return std::vector<StateId>{L.contains_all(both) ? kYes : kNo}; };
  s.delta = [both](LabelSet L, StateId, const Multiset<StateId> &m) {
    return L.contains_all(both) || m.count(kYes) ? kYes : kNo;
  };
  s.accepting = {kYes};
  s.rejecting = {kNo};
  s.kind = "atom";
  return make_explicit(std::move(s));
}

CmpaPtr atomic_Ryz(Symbol y, Symbol z) {
  enum : StateId { kR, kNotR, kY, kZ };
  ExplicitSpec s;
  std::string ryz = "E(" + short_name(y) + "," + short_name(z) + ")";
  s.states = {"q_" + ryz, "q_!" + ryz, "q_" + short_name(y), "q_" + short_name(z)};
  s.signature = LabelSet::single(y).with(z);
  auto pi = [y, z](LabelSet L) -> StateId {
    bool hy = L.contains(y), hz = L.contains(z);
    if (hz && !hy) return kZ;
    if (hy && !hz) return kY;
    return kNotR;
  };
  s.init = [pi](LabelSet L) { return std::vector<StateId>{pi(L)}; };
  // Clauses in the order of the construction; the first that applies wins.
  s.delta = [pi](LabelSet L, StateId, const Multiset<StateId> &m) -> StateId {
    StateId init = pi(L);
    if (init == kZ) return kZ;
    if (init == kY && !m.count(kZ)) return kY;
    if ((init == kY && m.count(kZ)) || (init == kNotR && m.count(kR))) return kR;
    return kNotR;
  };
  s.accepting = {kR};
  s.rejecting = {kNotR, kY, kZ};
  s.kind = "atom";
  return make_explicit(std::move(s));
}

CmpaPtr atomic_eq(Symbol y, Symbol z) {
  enum : StateId { kEq, kNe };
  ExplicitSpec s;
  std::string e = short_name(y) + "=" + short_name(z);
  std::string ne = short_name(y) + "!=" + short_name(z);
  s.states = {"q_" + e, "q_" + ne};
  s.signature = LabelSet::single(y).with(z);
  LabelSet both = s.signature;
  s.init = [both](LabelSet L) { return std::vector<StateId>{L.contains_all(both) ? kEq : kNe}; };
  s.delta = [both](LabelSet L, StateId, const Multiset<StateId> &m) {
    return L.contains_all(both) || m.count(kEq) ? kEq : kNe;
  };
  s.accepting = {kEq};
  s.rejecting = {kNe};
  s.kind = "atom";
  return make_explicit(std::move(s));
}

CmpaPtr properness(const std::vector<Symbol> &vars) {
  if (vars.empty()) throw Error("properness needs at least one variable");
  const std::size_t n = vars.size();
  std::size_t count = 1;
  for (std::size_t i = 0; i < n; ++i) count *= 3;

  // State index = sum of k_i * 3^i.
  auto digits = [n](StateId q) {
    std::vector<unsigned> k(n);
    for (std::size_t i = 0; i < n; ++i, q /= 3) k[i] = q % 3;
    return k;
  };
  auto encode = [n](const std::vector<unsigned> &k) {
    StateId q = 0;
    for (std::size_t i = n; i-- > 0;) q = q * 3 + k[i];
    return q;
  };

  ExplicitSpec s;
  s.bound = 2;
  for (auto v : vars) s.signature = s.signature.with(v);
  for (StateId q = 0; q < count; ++q) {
    auto k = digits(q);
    std::string name = "q_";
    bool all_one = true, any_two = false;
    for (std::size_t i = 0; i < n; ++i) {
      if (i) name += ",";
      name += short_name(vars[i]) + ">=" + std::to_string(k[i]);
      all_one = all_one && k[i] == 1;
      any_two = any_two || k[i] == 2;
    }
    s.states.push_back(name);
    if (all_one) s.accepting.insert(q);
    if (any_two) s.rejecting.insert(q);
  }
  auto pi = [vars, encode](LabelSet L) {
    std::vector<unsigned> k;
    for (auto v : vars) k.push_back(L.contains(v) ? 1 : 0);
    return encode(k);
  };
  s.init = [pi](LabelSet L) { return std::vector<StateId>{pi(L)}; };
  s.delta = [pi, digits, encode, n](LabelSet L, StateId, const Multiset<StateId> &m) {
    auto l = digits(pi(L));
    for (auto &[q, c] : m) {
      auto k = digits(q);
      for (std::size_t i = 0; i < n; ++i) l[i] += static_cast<unsigned>(k[i] * std::min<std::uint64_t>(c, 2));
    }
    for (auto &x : l) x = std::min(x, 2u);
    return encode(l);
  };
  s.kind = "proper";
  return make_explicit(std::move(s));
}

CmpaPtr exists_fo(const CmpaPtr &psi, Symbol y, std::size_t state_budget, bool reduce) {
  auto a1 = product(psi, properness({y}), ProductMode::ProperConcat, state_budget);
  if (reduce) a1 = minimize(a1, state_budget);
  auto out = powerset(a1, y, PowersetMode::Existential, state_budget);
  return reduce ? minimize(out, state_budget) : out;
}

CmpaPtr exists_so(const CmpaPtr &psi, Symbol Y, std::size_t state_budget, bool reduce) {
  auto out = powerset(psi, Y, PowersetMode::Existential, state_budget);
  return reduce ? minimize(out, state_budget) : out;
}

CmpaPtr compile_formula(const MsoFormula &phi, std::size_t state_budget, bool reduce) {
  const MsoNode &n = *phi;
  auto sub = [&](const MsoFormula &f) { return compile_formula(f, state_budget, reduce); };
  switch (n.kind) {
    case MsoKind::Atom:
      return atomic_Py(n.pred_is_var ? so_symbol(n.pred) : intern_symbol(n.pred),
                       fo_symbol(n.var1));
    case MsoKind::Edge:
      return atomic_Ryz(fo_symbol(n.var1), fo_symbol(n.var2));
    case MsoKind::Eq:
      return atomic_eq(fo_symbol(n.var1), fo_symbol(n.var2));
    case MsoKind::Not:
      return negate(sub(n.left));
    case MsoKind::And: {
      auto out = product(sub(n.left), sub(n.right), ProductMode::Conjunction, state_budget);
      return reduce ? minimize(out, state_budget) : out;
    }
    case MsoKind::ExistsFO:
      return exists_fo(sub(n.left), fo_symbol(n.var1), state_budget, reduce);
    case MsoKind::ExistsSO:
      return exists_so(sub(n.left), so_symbol(n.var1), state_budget, reduce);
  }
  throw Error("unknown formula node");
}

}  // namespace mpa
