//
// Project mpa - message-passing automata over labeled trees
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstdint>
#include <map>
#include <string>

namespace mpa {

/// Finitely supported multiset. Entries with count 0 are never stored.
template <typename E>
class Multiset {
 public:
  using Count = std::uint64_t;

  Multiset() = default;

  void add(const E &e, Count n = 1) {
    if (n != 0) counts_[e] += n;
  }

  Count count(const E &e) const {
    auto it = counts_.find(e);
    return it == counts_.end() ? 0 : it->second;
  }

  Count total() const {
    Count t = 0;
    for (auto &[e, n] : counts_) t += n;
    return t;
  }

  bool empty() const { return counts_.empty(); }
  std::size_t support_size() const { return counts_.size(); }

  auto begin() const { return counts_.begin(); }
  auto end() const { return counts_.end(); }

  /// M|k: every count clipped at k.
  Multiset capped(Count k) const {
    Multiset out;
    for (auto &[e, n] : counts_) out.add(e, n < k ? n : k);
    return out;
  }

  friend bool operator==(const Multiset &, const Multiset &) = default;

 private:
  std::map<E, Count> counts_;
};

/// Saturating unsigned arithmetic for formal state counts and bounds, which
/// grow as towers of exponentials under nested power-set constructions.
struct SatCount {
  static constexpr std::uint64_t kMax = ~std::uint64_t{0};
  std::uint64_t value = 0;

  bool saturated() const { return value == kMax; }

  friend SatCount operator+(SatCount a, SatCount b) {
    std::uint64_t r;
    if (__builtin_add_overflow(a.value, b.value, &r)) return {kMax};
    return {r};
  }
  friend SatCount operator*(SatCount a, SatCount b) {
    std::uint64_t r;
    if (__builtin_mul_overflow(a.value, b.value, &r)) return {kMax};
    return {r};
  }
  static SatCount pow2(SatCount e) {
    if (e.value >= 64) return {kMax};
    return {std::uint64_t{1} << e.value};
  }
  friend bool operator==(SatCount, SatCount) = default;
  friend auto operator<=>(SatCount, SatCount) = default;

  std::string to_string() const {
    return saturated() ? std::string(">=2^64") : std::to_string(value);
  }
};

inline SatCount max(SatCount a, SatCount b) { return a.value < b.value ? b : a; }

}  // namespace mpa
