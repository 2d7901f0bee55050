//
// Project mpa - message-passing automata over labeled trees
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <set>
#include <string>

#include "mpa/detail/lexer.hpp"
#include "mpa/logic/gml.hpp"

namespace mpa {

/// Parses one GML formula or schema starting at the cursor, leaving the
/// cursor on the first token after it.
GmlFormula parse_gml_tokens(detail::TokenCursor &cur, const std::set<std::string> &vars);

}  // namespace mpa
