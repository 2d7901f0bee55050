//
// Project mpa - message-passing automata over labeled trees
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <bit>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

namespace mpa {

/// Interned proposition symbol. Variable-induced symbols live in the same
/// table under the prefixes `x:` (first-order) and `X:` (second-order).
using Symbol = std::uint8_t;

inline constexpr std::size_t kMaxSymbols = 64;

/// Returns the id for `name`, interning it on first use. Thread-safe.
/// Throws mpa::Error once more than kMaxSymbols distinct names exist.
Symbol intern_symbol(std::string_view name);
const std::string &symbol_name(Symbol s);

Symbol fo_symbol(std::string_view var);
Symbol so_symbol(std::string_view var);

bool is_identifier(std::string_view name);
/// Accepts identifiers and the `x:NAME` / `X:NAME` variable forms.
bool is_label_name(std::string_view name);

class LabelSet {
 public:
  constexpr LabelSet() = default;
  constexpr explicit LabelSet(std::uint64_t bits) : bits_(bits) {}
  LabelSet(std::initializer_list<std::string_view> names);

  static LabelSet single(Symbol s) { return LabelSet(std::uint64_t{1} << s); }

  constexpr std::uint64_t bits() const noexcept { return bits_; }
  constexpr bool empty() const noexcept { return bits_ == 0; }
  constexpr std::size_t size() const noexcept {
    return static_cast<std::size_t>(std::popcount(bits_));
  }

  constexpr bool contains(Symbol s) const noexcept {
    return (bits_ >> s) & 1U;
  }
  constexpr bool contains_all(LabelSet other) const noexcept {
    return (bits_ & other.bits_) == other.bits_;
  }

  LabelSet with(Symbol s) const noexcept {
    return LabelSet(bits_ | (std::uint64_t{1} << s));
  }
  LabelSet without(Symbol s) const noexcept {
    return LabelSet(bits_ & ~(std::uint64_t{1} << s));
  }

  friend constexpr LabelSet operator|(LabelSet a, LabelSet b) noexcept {
    return LabelSet(a.bits_ | b.bits_);
  }
  friend constexpr LabelSet operator&(LabelSet a, LabelSet b) noexcept {
    return LabelSet(a.bits_ & b.bits_);
  }
  friend constexpr LabelSet operator-(LabelSet a, LabelSet b) noexcept {
    return LabelSet(a.bits_ & ~b.bits_);
  }
  friend constexpr bool operator==(LabelSet, LabelSet) = default;
  friend constexpr auto operator<=>(LabelSet a, LabelSet b) noexcept {
    return a.bits_ <=> b.bits_;
  }

  std::vector<Symbol> symbols() const;
  /// Member names sorted by byte order.
  std::vector<std::string> names() const;
  /// `{a,b}` with names sorted.
  std::string to_string() const;

  /// Every subset of this set, in increasing bit order.
  std::vector<LabelSet> subsets() const;

 private:
  std::uint64_t bits_ = 0;
};

struct LabelSetHash {
  std::size_t operator()(LabelSet s) const noexcept {
    return std::hash<std::uint64_t>{}(s.bits());
  }
};

}  // namespace mpa
