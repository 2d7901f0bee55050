//
// Project mpa - message-passing automata over labeled trees
// SPDX-License-Identifier: Apache-2.0
//

#include "mpa/symbols.hpp"

#include <algorithm>
#include <deque>
#include <mutex>
#include <shared_mutex>
#include <unordered_map>

#include "mpa/errors.hpp"

namespace mpa {
namespace {

struct SymbolTable {
  std::shared_mutex mutex;
  std::deque<std::string> names;
  std::unordered_map<std::string, Symbol> ids;
};

SymbolTable &table() {
  static SymbolTable t;
  return t;
}

}  // namespace

Symbol intern_symbol(std::string_view name) {
  auto &t = table();
  {
    std::shared_lock lock(t.mutex);
    if (auto it = t.ids.find(std::string(name)); it != t.ids.end())
      return it->second;
  }
  std::unique_lock lock(t.mutex);
  if (auto it = t.ids.find(std::string(name)); it != t.ids.end())
    return it->second;
  if (t.names.size() >= kMaxSymbols)
    throw Error("symbol table full (max " + std::to_string(kMaxSymbols) +
                " symbols): cannot intern '" + std::string(name) + "'");
  auto id = static_cast<Symbol>(t.names.size());
  t.names.emplace_back(name);
  t.ids.emplace(std::string(name), id);
  return id;
}

const std::string &symbol_name(Symbol s) {
  auto &t = table();
  std::shared_lock lock(t.mutex);
  return t.names.at(s);
}

Symbol fo_symbol(std::string_view var) {
  return intern_symbol("x:" + std::string(var));
}

Symbol so_symbol(std::string_view var) {
  return intern_symbol("X:" + std::string(var));
}

bool is_identifier(std::string_view name) {
  if (name.empty()) return false;
  auto alpha = [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
  };
  if (!alpha(name.front())) return false;
  return std::all_of(name.begin() + 1, name.end(), [&](char c) {
    return alpha(c) || (c >= '0' && c <= '9');
  });
}

bool is_label_name(std::string_view name) {
  if (name.size() > 2 && (name[0] == 'x' || name[0] == 'X') && name[1] == ':')
    return is_identifier(name.substr(2));
  return is_identifier(name);
}

LabelSet::LabelSet(std::initializer_list<std::string_view> names) {
  for (auto n : names) bits_ |= std::uint64_t{1} << intern_symbol(n);
}

std::vector<Symbol> LabelSet::symbols() const {
  std::vector<Symbol> out;
  for (std::uint64_t b = bits_; b != 0; b &= b - 1)
    out.push_back(static_cast<Symbol>(std::countr_zero(b)));
  return out;
}

std::vector<std::string> LabelSet::names() const {
  std::vector<std::string> out;
  for (auto s : symbols()) out.push_back(symbol_name(s));
  std::sort(out.begin(), out.end());
  return out;
}

std::string LabelSet::to_string() const {
  std::string out = "{";
  bool first = true;
  for (auto &n : names()) {
    if (!first) out += ',';
    out += n;
    first = false;
  }
  return out + "}";
}

std::vector<LabelSet> LabelSet::subsets() const {
  std::vector<LabelSet> out;
  // Standard submask walk, collected then sorted for a stable order.
  std::uint64_t sub = bits_;
  while (true) {
    out.emplace_back(sub);
    if (sub == 0) break;
    sub = (sub - 1) & bits_;
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace mpa
