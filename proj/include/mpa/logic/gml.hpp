//
// Project mpa - message-passing automata over labeled trees
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstdint>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "mpa/logic/mso.hpp"
#include "mpa/model/tree.hpp"

namespace mpa {

enum class GmlKind { Prop, Var, Not, Or, Diamond };

struct GmlNode;
using GmlFormula = std::shared_ptr<const GmlNode>;

/// GML formula, or GMSC schema when Var nodes occur.
struct GmlNode {
  GmlKind kind;
  /// Prop: proposition name. Var: schema variable name.
  std::string name;
  /// Diamond: the grade k of "at least k successors".
  std::uint64_t grade = 0;
  GmlFormula left;
  GmlFormula right;
};

namespace gml {

GmlFormula prop(std::string p);
GmlFormula var(std::string x);
GmlFormula neg(GmlFormula f);
GmlFormula disj(GmlFormula a, GmlFormula b);
GmlFormula conj(GmlFormula a, GmlFormula b);
GmlFormula dia(std::uint64_t k, GmlFormula f);

}  // namespace gml

std::size_t modal_depth(const GmlFormula &f);
std::uint64_t max_grade(const GmlFormula &f);
std::set<std::string> propositions(const GmlFormula &f);
std::set<std::string> schema_variables(const GmlFormula &f);

std::string to_string(const GmlFormula &f);

/// Grammar: p, !f, f | f, f & f, dia>=k f, (f). Identifiers in `variables`
/// parse as schema variables, all others as propositions.
GmlFormula parse_gml(std::string_view text, const std::set<std::string> &variables = {});

/// Truth of f at every node of `model`. Var nodes read `var_values[node]`,
/// a bitmask indexed by position in `var_order`.
std::vector<char> gml_eval_all(const KripkeModel &model, const GmlFormula &f,
                               const std::vector<std::string> &var_order = {},
                               const std::vector<std::uint64_t> *var_values = nullptr);

bool gml_eval(const RootedTree &tree, NodeId node, const GmlFormula &f);

/// Standard translation with point variable `x`. dia>=k psi becomes
/// exists y1 (E(x,y1) & psi(y1) & exists y2 (E(x,y2) & psi(y2) & y1 != y2 & ...)).
/// Throws Error on schema variables.
MsoFormula gml_to_mso(const GmlFormula &f, const std::string &x = "x");

/// Finite stand-in for a countable disjunction of GML formulas.
struct OmegaGml {
  std::vector<GmlFormula> disjuncts;

  explicit OmegaGml(std::vector<GmlFormula> d);
  bool eval(const RootedTree &tree, NodeId node) const;
  /// Index of the first disjunct true at `node`, or -1.
  int first_true(const RootedTree &tree, NodeId node) const;
};

}  // namespace mpa
