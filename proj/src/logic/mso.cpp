//
// Project mpa - message-passing automata over labeled trees
// SPDX-License-Identifier: Apache-2.0
//

#include "mpa/logic/mso.hpp"

#include <algorithm>
#include <functional>
#include <unordered_map>

#include "mpa/detail/lexer.hpp"

namespace mpa {

namespace mso {

namespace {
MsoFormula make(MsoNode n) { return std::make_shared<const MsoNode>(std::move(n)); }
}  // namespace

MsoFormula atom(std::string pred, std::string y, bool pred_is_var) {
  return make({MsoKind::Atom, std::move(pred), pred_is_var, std::move(y), "", nullptr, nullptr});
}
MsoFormula edge(std::string y, std::string z) {
  return make({MsoKind::Edge, "", false, std::move(y), std::move(z), nullptr, nullptr});
}
MsoFormula eq(std::string y, std::string z) {
  return make({MsoKind::Eq, "", false, std::move(y), std::move(z), nullptr, nullptr});
}
MsoFormula neg(MsoFormula f) {
  return make({MsoKind::Not, "", false, "", "", std::move(f), nullptr});
}
MsoFormula conj(MsoFormula a, MsoFormula b) {
  return make({MsoKind::And, "", false, "", "", std::move(a), std::move(b)});
}
MsoFormula disj(MsoFormula a, MsoFormula b) {
  return neg(conj(neg(std::move(a)), neg(std::move(b))));
}
MsoFormula exists(std::string y, MsoFormula f) {
  return make({MsoKind::ExistsFO, "", false, std::move(y), "", std::move(f), nullptr});
}
MsoFormula exists2(std::string Y, MsoFormula f) {
  return make({MsoKind::ExistsSO, "", false, std::move(Y), "", std::move(f), nullptr});
}
MsoFormula forall(std::string y, MsoFormula f) {
  return neg(exists(std::move(y), neg(std::move(f))));
}
MsoFormula forall2(std::string Y, MsoFormula f) {
  return neg(exists2(std::move(Y), neg(std::move(f))));
}

}  // namespace mso

namespace {

void collect_free(const MsoFormula &f, std::set<std::string> &bound_fo,
                  std::set<std::string> &bound_so, FreeVars &out) {
  auto use_fo = [&](const std::string &v) {
    if (!bound_fo.count(v)) out.first_order.insert(v);
  };
  switch (f->kind) {
    case MsoKind::Atom:
      use_fo(f->var1);
      if (f->pred_is_var && !bound_so.count(f->pred)) out.second_order.insert(f->pred);
      break;
    case MsoKind::Edge:
    case MsoKind::Eq:
      use_fo(f->var1);
      use_fo(f->var2);
      break;
    case MsoKind::Not:
      collect_free(f->left, bound_fo, bound_so, out);
      break;
    case MsoKind::And:
      collect_free(f->left, bound_fo, bound_so, out);
      collect_free(f->right, bound_fo, bound_so, out);
      break;
    case MsoKind::ExistsFO: {
      bool fresh = bound_fo.insert(f->var1).second;
      collect_free(f->left, bound_fo, bound_so, out);
      if (fresh) bound_fo.erase(f->var1);
      break;
    }
    case MsoKind::ExistsSO: {
      bool fresh = bound_so.insert(f->var1).second;
      collect_free(f->left, bound_fo, bound_so, out);
      if (fresh) bound_so.erase(f->var1);
      break;
    }
  }
}

}  // namespace

FreeVars free_vars(const MsoFormula &f) {
  FreeVars out;
  std::set<std::string> bf, bs;
  collect_free(f, bf, bs, out);
  return out;
}

std::size_t quantifier_depth(const MsoFormula &f) {
  switch (f->kind) {
    case MsoKind::Not:
      return quantifier_depth(f->left);
    case MsoKind::And:
      return std::max(quantifier_depth(f->left), quantifier_depth(f->right));
    case MsoKind::ExistsFO:
    case MsoKind::ExistsSO:
      return 1 + quantifier_depth(f->left);
    default:
      return 0;
  }
}

bool has_so_quantifier(const MsoFormula &f) {
  switch (f->kind) {
    case MsoKind::ExistsSO:
      return true;
    case MsoKind::Not:
    case MsoKind::ExistsFO:
      return has_so_quantifier(f->left);
    case MsoKind::And:
      return has_so_quantifier(f->left) || has_so_quantifier(f->right);
    default:
      return false;
  }
}

std::set<std::string> propositions(const MsoFormula &f) {
  std::set<std::string> out;
  std::function<void(const MsoFormula &)> go = [&](const MsoFormula &g) {
    if (g->kind == MsoKind::Atom && !g->pred_is_var) out.insert(g->pred);
    if (g->left) go(g->left);
    if (g->right) go(g->right);
  };
  go(f);
  return out;
}

std::string to_string(const MsoFormula &f) {
  switch (f->kind) {
    case MsoKind::Atom:
      return f->pred + "(" + f->var1 + ")";
    case MsoKind::Edge:
      return "E(" + f->var1 + "," + f->var2 + ")";
    case MsoKind::Eq:
      return f->var1 + " = " + f->var2;
    case MsoKind::Not:
      return "!" + (f->left->kind == MsoKind::Eq ? "(" + to_string(f->left) + ")"
                                                  : to_string(f->left));
    case MsoKind::And:
      return "(" + to_string(f->left) + " & " + to_string(f->right) + ")";
    case MsoKind::ExistsFO:
      return "(exists " + f->var1 + ". " + to_string(f->left) + ")";
    case MsoKind::ExistsSO:
      return "(exists2 " + f->var1 + ". " + to_string(f->left) + ")";
  }
  return "";
}

namespace {

class MsoParser {
 public:
  MsoParser(std::string_view text, const MsoParseOptions &opts)
      : cur_(detail::tokenize(text)), opts_(opts) {}

  MsoFormula parse() {
    auto f = formula();
    if (!cur_.at_end()) cur_.fail("unexpected token");
    return f;
  }

 private:
  static bool is_quantifier(const std::string &w) {
    return w == "exists" || w == "forall" || w == "exists2" || w == "forall2";
  }

  MsoFormula formula() {
    if (cur_.peek().kind == detail::Tok::Ident && is_quantifier(cur_.peek().text) &&
        cur_.peek(1).kind == detail::Tok::Ident)
      return quantified();
    auto lhs = disjunction();
    if (cur_.accept("->")) return mso::disj(mso::neg(lhs), formula());
    return lhs;
  }

  MsoFormula quantified() {
    std::string q = cur_.next().text;
    std::string v = cur_.ident("variable");
    cur_.expect(".");
    bool second = q.back() == '2';
    auto &scope = second ? so_scope_ : fo_scope_;
    scope.push_back(v);
    auto body = formula();
    scope.pop_back();
    if (q == "exists") return mso::exists(v, body);
    if (q == "forall") return mso::forall(v, body);
    if (q == "exists2") return mso::exists2(v, body);
    return mso::forall2(v, body);
  }

  MsoFormula disjunction() {
    auto f = conjunction();
    while (cur_.accept("|")) f = mso::disj(f, conjunction());
    return f;
  }

  MsoFormula conjunction() {
    auto f = unary();
    while (cur_.accept("&")) f = mso::conj(f, unary());
    return f;
  }

  MsoFormula unary() {
    if (cur_.accept("!")) return mso::neg(unary());
    if (cur_.peek().kind == detail::Tok::Ident && is_quantifier(cur_.peek().text) &&
        cur_.peek(1).kind == detail::Tok::Ident)
      return quantified();
    if (cur_.accept("(")) {
      auto f = formula();
      cur_.expect(")");
      return f;
    }
    return atomic();
  }

  MsoFormula atomic() {
    const auto tok = cur_.peek();
    std::string name = cur_.ident("formula");
    if (cur_.accept("(")) {
      std::string a = fo_var();
      if (cur_.accept(",")) {
        std::string b = fo_var();
        cur_.expect(")");
        if (name != "E")
          throw SyntaxError("binary predicate must be E", tok.line, tok.column);
        return mso::edge(a, b);
      }
      cur_.expect(")");
      bool is_var = std::find(so_scope_.begin(), so_scope_.end(), name) != so_scope_.end() ||
                    opts_.free_second_order.count(name);
      return mso::atom(name, a, is_var);
    }
    check_fo(name);
    if (cur_.accept("=")) return mso::eq(name, fo_var());
    if (cur_.accept("!=")) return mso::neg(mso::eq(name, fo_var()));
    cur_.fail("expected '(' , '=' or '!='");
  }

  std::string fo_var() {
    std::string v = cur_.ident("variable");
    check_fo(v);
    return v;
  }

  void check_fo(const std::string &v) const {
    if (std::find(fo_scope_.begin(), fo_scope_.end(), v) != fo_scope_.end()) return;
    if (opts_.free_first_order.count(v)) return;
    throw UnboundVariable(v);
  }

  detail::TokenCursor cur_;
  const MsoParseOptions &opts_;
  std::vector<std::string> fo_scope_;
  std::vector<std::string> so_scope_;
};

/// Formula with variables resolved to slots, evaluated against an array
/// environment.
class SlotEvaluator {
 public:
  SlotEvaluator(const RootedTree &tree, const MsoFormula &f, const Interpretation &interp)
      : tree_(tree) {
    for (auto &[name, node] : interp.first_order) {
      if (node >= tree.size()) throw UnknownNode("node " + std::to_string(node));
      fo_names_.push_back(name);
      fo_.push_back(node);
    }
    for (auto &[name, nodes] : interp.second_order) {
      std::uint64_t mask = 0;
      for (auto v : nodes) {
        if (v >= tree.size()) throw UnknownNode("node " + std::to_string(v));
        if (v >= 64) throw SizeLimit("second-order value on a node above 63");
        mask |= std::uint64_t{1} << v;
      }
      so_names_.push_back(name);
      so_.push_back(mask);
    }
    root_ = compile(f);
  }

  bool run() { return eval(root_); }

 private:
  struct Op {
    MsoKind kind;
    int a = -1, b = -1;  // slots
    Symbol sym = 0;
    bool so_atom = false;
    int left = -1, right = -1;
  };

  int fo_slot(const std::string &v) const {
    for (int i = static_cast<int>(fo_names_.size()); i-- > 0;)
      if (fo_names_[i] == v) return i;
    throw UnboundVariable(v);
  }
  int so_slot(const std::string &v) const {
    for (int i = static_cast<int>(so_names_.size()); i-- > 0;)
      if (so_names_[i] == v) return i;
    throw UnboundVariable(v);
  }

  int compile(const MsoFormula &f) {
    Op op{f->kind};
    switch (f->kind) {
      case MsoKind::Atom:
        op.a = fo_slot(f->var1);
        if (f->pred_is_var) {
          op.so_atom = true;
          op.b = so_slot(f->pred);
        } else {
          op.sym = intern_symbol(f->pred);
        }
        break;
      case MsoKind::Edge:
      case MsoKind::Eq:
        op.a = fo_slot(f->var1);
        op.b = fo_slot(f->var2);
        break;
      case MsoKind::Not:
        op.left = compile(f->left);
        break;
      case MsoKind::And:
        op.left = compile(f->left);
        op.right = compile(f->right);
        break;
      case MsoKind::ExistsFO:
        op.a = static_cast<int>(fo_names_.size());
        fo_names_.push_back(f->var1);
        fo_.push_back(0);
        op.left = compile(f->left);
        fo_names_.back() = "";  // out of scope for siblings
        break;
      case MsoKind::ExistsSO:
        if (tree_.size() > 64) throw SizeLimit("tree too large for set quantifier");
        op.a = static_cast<int>(so_names_.size());
        so_names_.push_back(f->var1);
        so_.push_back(0);
        op.left = compile(f->left);
        so_names_.back() = "";
        break;
    }
    ops_.push_back(op);
    return static_cast<int>(ops_.size()) - 1;
  }

  bool eval(int i) {
    const Op &op = ops_[i];
    switch (op.kind) {
      case MsoKind::Atom:
        if (op.so_atom) return (so_[op.b] >> fo_[op.a]) & 1U;
        return tree_.label(fo_[op.a]).contains(op.sym);
      case MsoKind::Edge:
        return tree_.parent(fo_[op.b]) == std::optional<NodeId>(fo_[op.a]);
      case MsoKind::Eq:
        return fo_[op.a] == fo_[op.b];
      case MsoKind::Not:
        return !eval(op.left);
      case MsoKind::And:
        return eval(op.left) && eval(op.right);
      case MsoKind::ExistsFO:
        for (NodeId v = 0; v < tree_.size(); ++v) {
          fo_[op.a] = v;
          if (eval(op.left)) return true;
        }
        return false;
      case MsoKind::ExistsSO: {
        std::uint64_t n = tree_.size();
        std::uint64_t limit = n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
        for (std::uint64_t s = 0;; ++s) {
          so_[op.a] = s;
          if (eval(op.left)) return true;
          if (s == limit) break;
        }
        return false;
      }
    }
    return false;
  }

  const RootedTree &tree_;
  std::vector<std::string> fo_names_, so_names_;
  std::vector<NodeId> fo_;
  std::vector<std::uint64_t> so_;
  std::vector<Op> ops_;
  int root_ = -1;
};

}  // namespace

MsoFormula parse_mso(std::string_view text, const MsoParseOptions &opts) {
  return MsoParser(text, opts).parse();
}

bool mso_check(const RootedTree &tree, const MsoFormula &f, const Interpretation &interp,
               const MsoOracleOptions &opts) {
  if (has_so_quantifier(f) && tree.size() > opts.size_cap)
    throw SizeLimit("oracle cap: tree has " + std::to_string(tree.size()) +
                    " nodes, set quantifiers allowed up to " + std::to_string(opts.size_cap));
  auto fv = free_vars(f);
  for (auto &v : fv.first_order)
    if (!interp.first_order.count(v)) throw UnboundVariable(v);
  for (auto &v : fv.second_order)
    if (!interp.second_order.count(v)) throw UnboundVariable(v);
  return SlotEvaluator(tree, f, interp).run();
}

bool mso_check_root(const RootedTree &tree, const MsoFormula &f, const std::string &x,
                    const MsoOracleOptions &opts) {
  Interpretation i;
  i.first_order[x] = tree.root();
  return mso_check(tree, f, i, opts);
}

}  // namespace mpa
