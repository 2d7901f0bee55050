//
// Project mpa - message-passing automata over labeled trees
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "mpa/logic/gmsc.hpp"
#include "mpa/logic/mso.hpp"

namespace mpa {

template <typename T>
struct Named {
  std::string name;
  T value;
};

std::string read_file(const std::filesystem::path &path);

/// Every `*.mso` file in `dir`, sorted by file name.
std::vector<Named<MsoFormula>> load_mso_corpus(const std::filesystem::path &dir);
/// One GML formula per non-blank, non-comment line.
std::vector<Named<GmlFormula>> load_gml_corpus(const std::filesystem::path &file);
/// Every `*.gmsc` file in `dir`, sorted by file name.
std::vector<Named<GmscProgram>> load_gmsc_corpus(const std::filesystem::path &dir);

}  // namespace mpa
