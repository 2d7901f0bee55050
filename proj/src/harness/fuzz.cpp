//
// Project mpa - message-passing automata over labeled trees
// SPDX-License-Identifier: Apache-2.0
//

#include "mpa/harness/fuzz.hpp"

#include <algorithm>
#include <exception>
#include <ostream>
#include <random>

#include "mpa/compiler/compile.hpp"
#include "mpa/gnnf/gnn.hpp"
#include "mpa/harness/corpus.hpp"
#include "mpa/harness/samples.hpp"
#include "mpa/model/enumerate.hpp"
#include "mpa/model/tree_io.hpp"

namespace mpa {

const std::vector<std::string> &fuzz_properties() {
  static const std::vector<std::string> names = {"cap-idempotence", "run-set-equality",
                                                 "negate-involution", "gmsc-agreement",
                                                 "embedding"};
  return names;
}

void FuzzReport::write(std::ostream &out) const {
  out << "case\tproperty\ttree\tok\tdetail\n";
  for (auto &c : cases)
    out << c.index << '\t' << c.property << '\t' << c.tree << '\t' << (c.ok ? "yes" : "no")
        << '\t' << c.detail << '\n';
  out << "# cases " << cases.size() << ", failures " << failures << '\n';
}

namespace {

struct Fixtures {
  std::vector<CmpaPtr> nondet;
  std::vector<CmpaPtr> nondet_det;
  std::vector<Named<CmpaPtr>> mso;
  std::vector<Named<GmscProgram>> gmsc;
  std::vector<CmpaPtr> gmsc_automata;
  std::vector<EmbeddedAutomaton> embedded;
};

Fixtures load(const FuzzOptions &opts, const std::string &only) {
  Fixtures f;
  auto wants = [&](const char *p) { return only.empty() || only == p; };
  f.nondet = {samples::guess_reach(), samples::guess_count(), samples::guess_mix()};
  for (auto &a : f.nondet) f.nondet_det.push_back(determinize(a));
  if (wants("negate-involution"))
    for (auto &[name, phi] : load_mso_corpus(opts.corpus / "mso"))
      f.mso.push_back({name, compile_mso(phi).fixed_point});
  if (wants("gmsc-agreement")) {
    f.gmsc = load_gmsc_corpus(opts.corpus / "gmsc");
    for (auto &p : f.gmsc) f.gmsc_automata.push_back(compile_gmsc(p.value));
  }
  if (wants("embedding")) {
    f.embedded.push_back(embed_fcmpa(samples::a_py()));
    for (auto &d : f.nondet_det) f.embedded.push_back(embed_fcmpa(d));
  }
  return f;
}

template <typename T>
const T &pick(const std::vector<T> &v, std::mt19937_64 &rng) {
  return v[std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(rng)];
}

RootedTree tree_for(LabelSet alphabet, std::size_t max_nodes, std::mt19937_64 &rng) {
  auto n = std::uniform_int_distribution<std::size_t>(1, max_nodes)(rng);
  return random_tree(n, alphabet, rng);
}

void cap_idempotence(FuzzCase &c, const Fixtures &f, std::size_t max_nodes,
                     std::mt19937_64 &rng) {
  Multiset<StateId> m;
  std::uniform_int_distribution<unsigned> elem(0, 3), count(0, 6), kdist(1, 3);
  for (int i = 0; i < 6; ++i) m.add(elem(rng), count(rng));
  auto k = kdist(rng);
  auto mk = m.capped(k);
  bool ok = mk.capped(k) == mk && m.capped(36) == m;
  for (auto &[e, n] : mk) ok = ok && n <= k && n <= m.count(e);
  // A bounded automaton cannot tell M from M|k.
  const auto &a = pick(f.nondet_det, rng);
  auto t = tree_for(a->signature(), max_nodes, rng);
  auto tr = run(*a, t.model());
  const auto kb = a->bound().value;
  for (NodeId v = 0; v < t.size() && ok; ++v) {
    Multiset<StateId> children;
    for (auto w : t.model().successors[v]) children.add(tr.at(1, w), kb + 2);
    AggId full = a->agg_empty(), cut = a->agg_empty();
    for (auto &[q, n] : children)
      for (std::uint64_t i = 0; i < n; ++i) full = a->agg_add(full, q);
    for (auto &[q, n] : children.capped(kb))
      for (std::uint64_t i = 0; i < n; ++i) cut = a->agg_add(cut, q);
    auto P = t.model().labels[v];
    ok = a->apply(P, 0, full) == a->apply(P, 0, cut);
  }
  c.tree = serialize_tree(t);
  c.ok = ok;
  c.detail = "k=" + std::to_string(k) + " automaton=" + a->kind();
}

void run_set_equality(FuzzCase &c, const Fixtures &f, std::size_t max_nodes,
                      std::mt19937_64 &rng) {
  auto i = std::uniform_int_distribution<std::size_t>(0, f.nondet.size() - 1)(rng);
  auto t = tree_for(LabelSet{"p"}, max_nodes, rng);
  auto &d = dynamic_cast<const PowersetCmpa &>(*f.nondet_det[i]);
  c.tree = serialize_tree(t);
  c.ok = samples::run_sets_equal(*f.nondet[i], d, t.model(), t.depth() + 3, &c.detail);
  if (c.ok) c.detail = f.nondet[i]->kind();
}

void negate_involution(FuzzCase &c, const Fixtures &f, std::size_t max_nodes,
                       std::mt19937_64 &rng) {
  const auto &[name, a] = pick(f.mso, rng);
  auto t = tree_for(LabelSet{"p", "q"}, max_nodes, rng);
  auto m = t.model();
  m.labels[0] = m.labels[0].with(fo_symbol("x"));
  auto n = negate(a), nn = negate(n);
  auto v = decide(*a, m, 0, Acceptance::fixed_point());
  auto vn = decide(*n, m, 0, Acceptance::fixed_point());
  auto vnn = decide(*nn, m, 0, Acceptance::fixed_point());
  auto flipped = v == Verdict::Accept ? Verdict::Reject
                 : v == Verdict::Reject ? Verdict::Accept
                                        : Verdict::Neither;
  c.tree = serialize_tree(t);
  c.ok = vnn == v && vn == flipped;
  c.detail = name + " " + to_string(v) + "/" + to_string(vn) + "/" + to_string(vnn);
}

void gmsc_agreement(FuzzCase &c, const Fixtures &f, std::size_t max_nodes,
                    std::mt19937_64 &rng) {
  auto i = std::uniform_int_distribution<std::size_t>(0, f.gmsc.size() - 1)(rng);
  auto t = tree_for(LabelSet{"p", "q"}, max_nodes, rng);
  bool direct = gmsc_accepts(t, 0, f.gmsc[i].value);
  bool automaton =
      decide(*f.gmsc_automata[i], t.model(), 0, Acceptance::standard()) == Verdict::Accept;
  c.tree = serialize_tree(t);
  c.ok = direct == automaton;
  c.detail = f.gmsc[i].name;
}

void embedding(FuzzCase &c, const Fixtures &f, std::size_t max_nodes, std::mt19937_64 &rng) {
  const auto &e = pick(f.embedded, rng);
  auto t = tree_for(e.automaton->signature(), max_nodes, rng);
  auto ta = run(*e.automaton, t.model());
  auto tg = gnn_run(e.gnn, t.model());
  bool ok = true;
  for (std::size_t r = 0; r < ta.rounds.size() + 2 && ok; ++r)
    for (NodeId v = 0; v < t.size() && ok; ++v) ok = e.decode(tg.at(r, v)) == ta.at(r, v);
  c.tree = serialize_tree(t);
  c.ok = ok;
  c.detail = e.automaton->kind();
}

}  // namespace

FuzzReport fuzz(const FuzzOptions &opts) {
  const auto &props = fuzz_properties();
  if (!opts.property.empty() &&
      std::find(props.begin(), props.end(), opts.property) == props.end())
    throw Error("unknown property '" + opts.property + "'");
  if (opts.max_nodes == 0) throw Error("max-nodes must be positive");
  Fixtures f = load(opts, opts.property);
  std::vector<FuzzCase> cases(opts.cases);
  std::exception_ptr failure;
  auto one = [&](std::size_t i) {
    std::seed_seq seq{opts.seed, static_cast<std::uint64_t>(i)};
    std::mt19937_64 rng(seq);
    FuzzCase &c = cases[i];
    c.index = i;
    c.property = opts.property.empty() ? props[i % props.size()] : opts.property;
    if (c.property == "cap-idempotence") cap_idempotence(c, f, opts.max_nodes, rng);
    else if (c.property == "run-set-equality") run_set_equality(c, f, opts.max_nodes, rng);
    else if (c.property == "negate-involution") negate_involution(c, f, opts.max_nodes, rng);
    else if (c.property == "gmsc-agreement") gmsc_agreement(c, f, opts.max_nodes, rng);
    else embedding(c, f, opts.max_nodes, rng);
  };
  const auto n = static_cast<std::int64_t>(opts.cases);
#pragma omp parallel for schedule(dynamic, 4) if (opts.parallel)
  for (std::int64_t i = 0; i < n; ++i) {
    try {
      one(static_cast<std::size_t>(i));
    } catch (...) {
#pragma omp critical
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  FuzzReport report;
  for (auto &c : cases) {
    if (!c.ok) ++report.failures;
    report.cases.push_back(std::move(c));
  }
  return report;
}

}  // namespace mpa
