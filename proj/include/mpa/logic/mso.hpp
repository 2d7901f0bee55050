//
// Project mpa - message-passing automata over labeled trees
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <memory>
#include <set>
#include <string>
#include <string_view>

#include "mpa/model/tree.hpp"

namespace mpa {

enum class MsoKind { Atom, Edge, Eq, Not, And, ExistsFO, ExistsSO };

struct MsoNode;
using MsoFormula = std::shared_ptr<const MsoNode>;

/// MSO syntax tree. Disjunction and universal quantifiers are sugar over
/// Not/And/Exists and never appear as nodes.
struct MsoNode {
  MsoKind kind;
  /// Atom: proposition symbol or second-order variable name.
  std::string pred;
  /// Atom: `pred` names a second-order variable rather than a proposition.
  bool pred_is_var = false;
  /// Atom: the argument. Edge/Eq: the two arguments. Exists*: bound variable.
  std::string var1;
  std::string var2;
  MsoFormula left;
  MsoFormula right;
};

namespace mso {

MsoFormula atom(std::string pred, std::string y, bool pred_is_var = false);
MsoFormula edge(std::string y, std::string z);
MsoFormula eq(std::string y, std::string z);
MsoFormula neg(MsoFormula f);
MsoFormula conj(MsoFormula a, MsoFormula b);
MsoFormula disj(MsoFormula a, MsoFormula b);
MsoFormula exists(std::string y, MsoFormula f);
MsoFormula exists2(std::string Y, MsoFormula f);
MsoFormula forall(std::string y, MsoFormula f);
MsoFormula forall2(std::string Y, MsoFormula f);

}  // namespace mso

struct FreeVars {
  std::set<std::string> first_order;
  std::set<std::string> second_order;
};

FreeVars free_vars(const MsoFormula &f);
/// Maximum nesting of quantifiers.
std::size_t quantifier_depth(const MsoFormula &f);
bool has_so_quantifier(const MsoFormula &f);
/// Proposition symbols used in atoms.
std::set<std::string> propositions(const MsoFormula &f);

/// Text in the input grammar; parse_mso(to_string(f)) rebuilds f.
std::string to_string(const MsoFormula &f);

struct MsoParseOptions {
  /// First-order variables allowed to occur free.
  std::set<std::string> free_first_order{"x"};
  /// Second-order variables allowed to occur free.
  std::set<std::string> free_second_order{};
};

/// Grammar: P(y), E(y,z), y = z, y != z, !f, f & f, f | f, f -> f,
/// exists y. f, forall y. f, exists2 Y. f, forall2 Y. f, parentheses.
/// A predicate name bound by exists2/forall2 (or listed as free
/// second-order) is a set variable; any other is a proposition symbol.
/// Throws SyntaxError or UnboundVariable.
MsoFormula parse_mso(std::string_view text, const MsoParseOptions &opts = {});

struct MsoOracleOptions {
  /// Largest tree on which second-order quantifiers are enumerated.
  std::size_t size_cap = 12;
};

/// Brute-force Tarskian evaluation on `tree` with E(y,z) meaning z is a child
/// of y. Throws UnboundVariable if `interp` misses a free variable and
/// SizeLimit when a set quantifier meets a tree above the cap.
bool mso_check(const RootedTree &tree, const MsoFormula &f,
               const Interpretation &interp, const MsoOracleOptions &opts = {});

/// Convenience for node properties phi(x): x is bound to the root.
bool mso_check_root(const RootedTree &tree, const MsoFormula &f,
                    const std::string &x = "x", const MsoOracleOptions &opts = {});

}  // namespace mpa
