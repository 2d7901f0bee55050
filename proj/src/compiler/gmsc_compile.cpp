//
// Project mpa - message-passing automata over labeled trees
// SPDX-License-Identifier: Apache-2.0
//

#include <map>

#include "mpa/compiler/compile.hpp"
#include "mpa/detail/intern.hpp"

namespace mpa {

namespace {

/// Subformulas of a list of bodies, children before parents.
struct Layers {
  struct Sub {
    GmlKind kind;
    Symbol prop = 0;
    std::size_t var = 0;
    std::uint64_t grade = 0;
    int left = -1, right = -1;
    std::size_t depth = 0;
  };
  std::vector<Sub> subs;
  std::vector<std::size_t> bodies;
  std::size_t depth = 0;

  Layers(const std::vector<GmlFormula> &fs, const GmscProgram &prog) {
    std::map<std::string, int> index;
    for (auto &f : fs) {
      bodies.push_back(static_cast<std::size_t>(add(f, prog, index)));
      depth = std::max(depth, subs[bodies.back()].depth);
    }
  }

  int add(const GmlFormula &f, const GmscProgram &prog, std::map<std::string, int> &index) {
    auto key = to_string(f);
    if (auto it = index.find(key); it != index.end()) return it->second;
    Sub s{f->kind};
    switch (f->kind) {
      case GmlKind::Prop:
        s.prop = intern_symbol(f->name);
        break;
      case GmlKind::Var:
        s.var = *prog.index_of(f->name);
        break;
      case GmlKind::Not:
        s.left = add(f->left, prog, index);
        s.depth = subs[s.left].depth;
        break;
      case GmlKind::Or:
        s.left = add(f->left, prog, index);
        s.right = add(f->right, prog, index);
        s.depth = std::max(subs[s.left].depth, subs[s.right].depth);
        break;
      case GmlKind::Diamond:
        s.grade = f->grade;
        s.left = add(f->left, prog, index);
        s.depth = subs[s.left].depth + 1;
        break;
    }
    subs.push_back(s);
    return index[key] = static_cast<int>(subs.size() - 1);
  }
};

using Bits = std::vector<std::uint64_t>;

bool bit(const Bits &b, std::size_t i) { return (b[i / 64] >> (i % 64)) & 1U; }
void set_bit(Bits &b, std::size_t i) { b[i / 64] |= std::uint64_t{1} << (i % 64); }

/// Phased simulation. A program round is computed layer by layer: after
/// `phase` transitions every subformula of modal depth <= phase holds its
/// value for the last completed assignment. The first stage computes the
/// initial bodies, later stages the rule bodies.
class GmscCmpa final : public Cmpa {
 public:
  struct Decoded {
    int stage = 0;  // 0: initial bodies, 1: rule bodies
    bool valid = false;
    std::size_t phase = 0;
    std::uint64_t assignment = 0;
    Bits bits;
  };

  GmscCmpa(const GmscProgram &prog, LabelSet signature, std::size_t budget)
      : Cmpa(signature, true, false, SatCount{prog.max_grade()},
             formal_count(prog)),
        prog_(prog),
        layers_{Layers(prog.init_bodies, prog), Layers(prog.rule_bodies, prog)},
        states_(budget, "gmsc states"),
        aggs_(4 * budget, "gmsc aggregates") {
    aggs_.intern({});
  }

  std::vector<StateId> init(LabelSet P) const override {
    P = P & signature_;
    Decoded d;
    d.bits = layer(0, P, 0, nullptr, 0);
    if (layers_[0].depth == 0) d = complete(0, P, d.bits);
    return {encode(d)};
  }

  AggId agg_empty() const override { return 0; }

  AggId agg_add(AggId agg, StateId child) const override {
    return add_memo_.get_or_compute(detail::pack(agg, child), [&] {
      auto c = aggs_.get(agg);
      auto it = std::lower_bound(c.begin(), c.end(), std::make_pair(child, std::uint32_t{0}));
      if (it != c.end() && it->first == child) {
        if (it->second < bound_.value) ++it->second;
      } else {
        c.insert(it, {child, 1});
      }
      return aggs_.intern(c);
    });
  }

  StateId apply(LabelSet P, StateId self, AggId agg) const override {
    P = P & signature_;
    return apply_memo_.get_or_compute(detail::ApplyKey{P.bits(), self, agg}, [&] {
      Decoded d = decode(self);
      const auto &children = aggs_.get(agg);
      Bits next = layer(d.stage, P, d.assignment, &children, d.phase + 1);
      if (d.phase + 1 >= layers_[d.stage].depth) return encode(complete(d.stage, P, next));
      d.phase += 1;
      d.bits = std::move(next);
      return encode(d);
    });
  }

  bool accepting(StateId q) const override {
    Decoded d = decode(q);
    return d.valid && (d.assignment & prog_.appointed_mask()) != 0;
  }
  bool rejecting(StateId) const override { return false; }

  std::string state_name(StateId q) const override {
    Decoded d = decode(q);
    std::string s = d.stage == 0 ? "init/" : "rule/";
    s += std::to_string(d.phase) + " ";
    if (!d.valid) {
      s += "-";
    } else {
      s += "{";
      bool first = true;
      for (std::size_t i = 0; i < prog_.size(); ++i)
        if ((d.assignment >> i) & 1U) {
          if (!first) s += ",";
          s += prog_.variables[i];
          first = false;
        }
      s += "}";
    }
    s += " ";
    for (std::size_t i = 0; i < layers_[d.stage].subs.size(); ++i) s += bit(d.bits, i) ? '1' : '0';
    return s;
  }

  std::size_t materialized_states() const override { return states_.size(); }
  std::string kind() const override { return "gmsc"; }

 private:
  static SatCount formal_count(const GmscProgram &prog) {
    Layers a(prog.init_bodies, prog), b(prog.rule_bodies, prog);
    SatCount n = SatCount::pow2(SatCount{prog.size()}) * SatCount{2};
    SatCount sa = SatCount::pow2(SatCount{a.subs.size()}) * SatCount{a.depth + 1};
    SatCount sb = SatCount::pow2(SatCount{b.subs.size()}) * SatCount{b.depth + 1};
    return n * (sa + sb);
  }

  Bits layer(int stage, LabelSet P, std::uint64_t assignment,
             const std::vector<std::pair<StateId, std::uint32_t>> *children,
             std::size_t phase) const {
    const Layers &L = layers_[stage];
    Bits out((L.subs.size() + 63) / 64, 0);
    std::vector<std::pair<Decoded, std::uint32_t>> kids;
    if (children)
      for (auto &[q, n] : *children) kids.emplace_back(decode(q), n);
    for (std::size_t i = 0; i < L.subs.size(); ++i) {
      const auto &s = L.subs[i];
      if (s.depth > phase) continue;
      bool v = false;
      switch (s.kind) {
        case GmlKind::Prop:
          v = P.contains(s.prop);
          break;
        case GmlKind::Var:
          v = (assignment >> s.var) & 1U;
          break;
        case GmlKind::Not:
          v = !bit(out, s.left);
          break;
        case GmlKind::Or:
          v = bit(out, s.left) || bit(out, s.right);
          break;
        case GmlKind::Diamond: {
          std::uint64_t count = 0;
          for (auto &[k, n] : kids) {
            if (k.stage != stage || k.phase + 1 != phase)
              throw Error("gmsc automaton: children out of step");
            if (bit(k.bits, s.left)) count += n;
          }
          v = count >= s.grade;
          break;
        }
      }
      if (v) set_bit(out, i);
    }
    return out;
  }

  Decoded complete(int stage, LabelSet P, const Bits &bits) const {
    Decoded d;
    d.stage = 1;
    d.valid = true;
    for (std::size_t i = 0; i < prog_.size(); ++i)
      if (bit(bits, layers_[stage].bodies[i])) d.assignment |= std::uint64_t{1} << i;
    d.bits = layer(1, P, d.assignment, nullptr, 0);
    return d;
  }

  StateId encode(const Decoded &d) const {
    Bits key{static_cast<std::uint64_t>(d.stage) | (d.valid ? 2U : 0U) |
                 (static_cast<std::uint64_t>(d.phase) << 2),
             d.assignment};
    key.insert(key.end(), d.bits.begin(), d.bits.end());
    return states_.intern(key);
  }

  Decoded decode(StateId q) const {
    const Bits &key = states_.get(q);
    Decoded d;
    d.stage = static_cast<int>(key[0] & 1U);
    d.valid = (key[0] & 2U) != 0;
    d.phase = static_cast<std::size_t>(key[0] >> 2);
    d.assignment = key[1];
    d.bits.assign(key.begin() + 2, key.end());
    return d;
  }

  GmscProgram prog_;
  Layers layers_[2];
  mutable detail::Interner<Bits, detail::VectorHash> states_;
  mutable detail::Interner<std::vector<std::pair<StateId, std::uint32_t>>,
                           detail::PairVectorHash>
      aggs_;
  mutable detail::Memo<std::uint64_t, AggId> add_memo_;
  mutable detail::Memo<detail::ApplyKey, StateId, detail::ApplyKeyHash> apply_memo_;
};

}  // namespace

CmpaPtr compile_gmsc(const GmscProgram &program, std::size_t state_budget) {
  LabelSet sig;
  auto collect = [&](const GmlFormula &f) {
    for (auto &p : propositions(f)) sig = sig.with(intern_symbol(p));
  };
  for (auto &f : program.init_bodies) collect(f);
  for (auto &f : program.rule_bodies) collect(f);
  return std::make_shared<const GmscCmpa>(program, sig, state_budget);
}

}  // namespace mpa
