//
// Project mpa - message-passing automata over labeled trees
// SPDX-License-Identifier: Apache-2.0
//

#include "mpa/logic/gml.hpp"

#include <algorithm>
#include <functional>

#include "mpa/detail/gml_parse.hpp"
#include "mpa/detail/lexer.hpp"

namespace mpa {

namespace gml {

namespace {
GmlFormula make(GmlNode n) { return std::make_shared<const GmlNode>(std::move(n)); }
}  // namespace

GmlFormula prop(std::string p) { return make({GmlKind::Prop, std::move(p), 0, nullptr, nullptr}); }
GmlFormula var(std::string x) { return make({GmlKind::Var, std::move(x), 0, nullptr, nullptr}); }
GmlFormula neg(GmlFormula f) { return make({GmlKind::Not, "", 0, std::move(f), nullptr}); }
GmlFormula disj(GmlFormula a, GmlFormula b) {
  return make({GmlKind::Or, "", 0, std::move(a), std::move(b)});
}
GmlFormula conj(GmlFormula a, GmlFormula b) {
  return neg(disj(neg(std::move(a)), neg(std::move(b))));
}
GmlFormula dia(std::uint64_t k, GmlFormula f) {
  return make({GmlKind::Diamond, "", k, std::move(f), nullptr});
}

}  // namespace gml

std::size_t modal_depth(const GmlFormula &f) {
  switch (f->kind) {
    case GmlKind::Not:
      return modal_depth(f->left);
    case GmlKind::Or:
      return std::max(modal_depth(f->left), modal_depth(f->right));
    case GmlKind::Diamond:
      return 1 + modal_depth(f->left);
    default:
      return 0;
  }
}

std::uint64_t max_grade(const GmlFormula &f) {
  switch (f->kind) {
    case GmlKind::Not:
      return max_grade(f->left);
    case GmlKind::Or:
      return std::max(max_grade(f->left), max_grade(f->right));
    case GmlKind::Diamond:
      return std::max(f->grade, max_grade(f->left));
    default:
      return 0;
  }
}

namespace {

void collect(const GmlFormula &f, GmlKind kind, std::set<std::string> &out) {
  if (f->kind == kind) out.insert(f->name);
  if (f->left) collect(f->left, kind, out);
  if (f->right) collect(f->right, kind, out);
}

}  // namespace

std::set<std::string> propositions(const GmlFormula &f) {
  std::set<std::string> out;
  collect(f, GmlKind::Prop, out);
  return out;
}

std::set<std::string> schema_variables(const GmlFormula &f) {
  std::set<std::string> out;
  collect(f, GmlKind::Var, out);
  return out;
}

std::string to_string(const GmlFormula &f) {
  switch (f->kind) {
    case GmlKind::Prop:
    case GmlKind::Var:
      return f->name;
    case GmlKind::Not:
      return "!" + to_string(f->left);
    case GmlKind::Or:
      return "(" + to_string(f->left) + " | " + to_string(f->right) + ")";
    case GmlKind::Diamond:
      return "dia>=" + std::to_string(f->grade) + " " + to_string(f->left);
  }
  return "";
}

namespace {

class GmlParser {
 public:
  GmlParser(detail::TokenCursor &cur, const std::set<std::string> &vars)
      : cur_(cur), vars_(vars) {}

  GmlFormula formula() {
    auto f = conjunction();
    while (cur_.accept("|")) f = gml::disj(f, conjunction());
    return f;
  }

 private:
  GmlFormula conjunction() {
    auto f = unary();
    while (cur_.accept("&")) f = gml::conj(f, unary());
    return f;
  }

  GmlFormula unary() {
    if (cur_.accept("!")) return gml::neg(unary());
    if (cur_.accept("(")) {
      auto f = formula();
      cur_.expect(")");
      return f;
    }
    if (cur_.is_word("dia") && cur_.is_punct(">=", 1)) {
      cur_.next();
      cur_.next();
      auto k = cur_.number();
      return gml::dia(k, unary());
    }
    std::string name = cur_.ident("formula");
    if (vars_.count(name)) return gml::var(name);
    return gml::prop(name);
  }

  detail::TokenCursor &cur_;
  const std::set<std::string> &vars_;
};

}  // namespace

GmlFormula parse_gml_tokens(detail::TokenCursor &cur, const std::set<std::string> &vars) {
  return GmlParser(cur, vars).formula();
}

GmlFormula parse_gml(std::string_view text, const std::set<std::string> &variables) {
  detail::TokenCursor cur(detail::tokenize(text));
  auto f = parse_gml_tokens(cur, variables);
  if (!cur.at_end()) cur.fail("unexpected token");
  return f;
}

std::vector<char> gml_eval_all(const KripkeModel &model, const GmlFormula &f,
                               const std::vector<std::string> &var_order,
                               const std::vector<std::uint64_t> *var_values) {
  const std::size_t n = model.size();
  std::vector<char> out(n, 0);
  switch (f->kind) {
    case GmlKind::Prop: {
      Symbol s = intern_symbol(f->name);
      for (std::size_t v = 0; v < n; ++v) out[v] = model.labels[v].contains(s);
      break;
    }
    case GmlKind::Var: {
      auto it = std::find(var_order.begin(), var_order.end(), f->name);
      if (it == var_order.end() || !var_values) throw UnboundVariable(f->name);
      auto bit = static_cast<std::size_t>(it - var_order.begin());
      for (std::size_t v = 0; v < n; ++v) out[v] = ((*var_values)[v] >> bit) & 1U;
      break;
    }
    case GmlKind::Not: {
      auto a = gml_eval_all(model, f->left, var_order, var_values);
      for (std::size_t v = 0; v < n; ++v) out[v] = !a[v];
      break;
    }
    case GmlKind::Or: {
      auto a = gml_eval_all(model, f->left, var_order, var_values);
      auto b = gml_eval_all(model, f->right, var_order, var_values);
      for (std::size_t v = 0; v < n; ++v) out[v] = a[v] || b[v];
      break;
    }
    case GmlKind::Diamond: {
      auto a = gml_eval_all(model, f->left, var_order, var_values);
      for (std::size_t v = 0; v < n; ++v) {
        std::uint64_t count = 0;
        for (auto u : model.successors[v]) count += a[u] ? 1 : 0;
        out[v] = count >= f->grade;
      }
      break;
    }
  }
  return out;
}

bool gml_eval(const RootedTree &tree, NodeId node, const GmlFormula &f) {
  if (node >= tree.size()) throw UnknownNode("node " + std::to_string(node));
  return gml_eval_all(tree.model(), f).at(node);
}

namespace {

class Translator {
 public:
  explicit Translator(const std::string &x) : x_(x) {}

  MsoFormula tr(const GmlFormula &f, const std::string &at) {
    switch (f->kind) {
      case GmlKind::Prop:
        return mso::atom(f->name, at);
      case GmlKind::Var:
        throw Error("gml_to_mso: schema variable '" + f->name + "' has no translation");
      case GmlKind::Not:
        return mso::neg(tr(f->left, at));
      case GmlKind::Or:
        return mso::disj(tr(f->left, at), tr(f->right, at));
      case GmlKind::Diamond:
        if (f->grade == 0) return mso::eq(at, at);
        return witnesses(f, at, {});
    }
    return nullptr;
  }

 private:
  /// One nesting level per witness; `prev` holds the witnesses bound so far.
  MsoFormula witnesses(const GmlFormula &f, const std::string &at,
                       std::vector<std::string> prev) {
    std::string y = fresh();
    MsoFormula body = mso::conj(mso::edge(at, y), tr(f->left, y));
    for (auto &p : prev) body = mso::conj(body, mso::neg(mso::eq(p, y)));
    prev.push_back(y);
    if (prev.size() < f->grade) body = mso::conj(body, witnesses(f, at, prev));
    return mso::exists(y, body);
  }

  std::string fresh() {
    while (true) {
      std::string name = "y" + std::to_string(++counter_);
      if (name != x_) return name;
    }
  }

  std::string x_;
  std::size_t counter_ = 0;
};

}  // namespace

MsoFormula gml_to_mso(const GmlFormula &f, const std::string &x) {
  return Translator(x).tr(f, x);
}

OmegaGml::OmegaGml(std::vector<GmlFormula> d) : disjuncts(std::move(d)) {
  if (disjuncts.empty()) throw Error("OmegaGml needs at least one disjunct");
}

bool OmegaGml::eval(const RootedTree &tree, NodeId node) const {
  return first_true(tree, node) >= 0;
}

int OmegaGml::first_true(const RootedTree &tree, NodeId node) const {
  for (std::size_t i = 0; i < disjuncts.size(); ++i)
    if (gml_eval(tree, node, disjuncts[i])) return static_cast<int>(i);
  return -1;
}

}  // namespace mpa
