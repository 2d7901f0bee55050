//
// Project mpa - message-passing automata over labeled trees
// SPDX-License-Identifier: Apache-2.0
//

#include "mpa/harness/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace mpa {

std::string read_file(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

namespace {

std::vector<std::filesystem::path> files_with_extension(const std::filesystem::path &dir,
                                                        const std::string &ext) {
  std::vector<std::filesystem::path> out;
  for (auto &e : std::filesystem::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ext) out.push_back(e.path());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

std::vector<Named<MsoFormula>> load_mso_corpus(const std::filesystem::path &dir) {
  std::vector<Named<MsoFormula>> out;
  for (auto &p : files_with_extension(dir, ".mso"))
    out.push_back({p.stem().string(), parse_mso(read_file(p))});
  return out;
}

std::vector<Named<GmlFormula>> load_gml_corpus(const std::filesystem::path &file) {
  std::vector<Named<GmlFormula>> out;
  std::istringstream in(read_file(file));
  std::string line;
  while (std::getline(in, line)) {
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    auto f = parse_gml(line);
    out.push_back({to_string(f), f});
  }
  return out;
}

std::vector<Named<GmscProgram>> load_gmsc_corpus(const std::filesystem::path &dir) {
  std::vector<Named<GmscProgram>> out;
  for (auto &p : files_with_extension(dir, ".gmsc"))
    out.push_back({p.stem().string(), parse_gmsc(read_file(p))});
  return out;
}

}  // namespace mpa
