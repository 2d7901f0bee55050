//
// Project mpa - message-passing automata over labeled trees
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <string>
#include <string_view>

#include "mpa/model/tree.hpp"

namespace mpa {

/// Grammar: tree := '(' labelset tree* ')'; labelset := '{' [name (',' name)*] '}'.
/// Whitespace between tokens is ignored. Throws SyntaxError.
RootedTree parse_tree(std::string_view text);

/// Canonical text: labels sorted, children sorted by their own canonical text.
std::string serialize_tree(const RootedTree &tree);

/// Canonical text of the subtree rooted at v.
std::string serialize_subtree(const RootedTree &tree, NodeId v);

}  // namespace mpa
