//
// Project mpa - message-passing automata over labeled trees
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "mpa/errors.hpp"

namespace mpa::detail {

struct VectorHash {
  template <typename T>
  std::size_t operator()(const std::vector<T> &v) const noexcept {
    std::size_t seed = v.size();
    for (auto &x : v)
      seed ^= std::hash<T>{}(x) + 0x9e3779b97f4a7c15ULL + (seed << 6) +
              (seed >> 2);
    return seed;
  }
};

struct PairVectorHash {
  template <typename A, typename B>
  std::size_t operator()(const std::vector<std::pair<A, B>> &v) const noexcept {
    std::size_t seed = v.size();
    for (auto &[a, b] : v) {
      seed ^= std::hash<A>{}(a) + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2);
      seed ^= std::hash<B>{}(b) + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2);
    }
    return seed;
  }
};

/// Dense id assignment for values, safe for concurrent lookup-or-insert.
/// Element references returned by get() stay valid for the interner's life.
template <typename Key, typename Hash = std::hash<Key>>
class Interner {
 public:
  explicit Interner(std::size_t budget = ~std::size_t{0}, std::string what = "")
      : budget_(budget), what_(std::move(what)) {}

  std::uint32_t intern(const Key &key) {
    {
      std::shared_lock lock(mutex_);
      if (auto it = ids_.find(key); it != ids_.end()) return it->second;
    }
    std::unique_lock lock(mutex_);
    if (auto it = ids_.find(key); it != ids_.end()) return it->second;
    if (values_.size() >= budget_)
      throw StateBudgetExceeded(what_ + ": more than " +
                                std::to_string(budget_) +
                                " materialized states");
    auto id = static_cast<std::uint32_t>(values_.size());
    values_.push_back(key);
    ids_.emplace(key, id);
    return id;
  }

  std::optional<std::uint32_t> find(const Key &key) const {
    std::shared_lock lock(mutex_);
    if (auto it = ids_.find(key); it != ids_.end()) return it->second;
    return std::nullopt;
  }

  const Key &get(std::uint32_t id) const {
    std::shared_lock lock(mutex_);
    return values_.at(id);
  }

  std::size_t size() const {
    std::shared_lock lock(mutex_);
    return values_.size();
  }

 private:
  mutable std::shared_mutex mutex_;
  std::deque<Key> values_;
  std::unordered_map<Key, std::uint32_t, Hash> ids_;
  std::size_t budget_;
  std::string what_;
};

/// Concurrent memo table. Values must be deterministic functions of keys,
/// so a lost race just recomputes the same value.
template <typename Key, typename Value, typename Hash = std::hash<Key>>
class Memo {
 public:
  template <typename F>
  Value get_or_compute(const Key &key, F &&compute) {
    {
      std::shared_lock lock(mutex_);
      if (auto it = map_.find(key); it != map_.end()) return it->second;
    }
    Value v = compute();
    std::unique_lock lock(mutex_);
    return map_.try_emplace(key, std::move(v)).first->second;
  }

 private:
  std::shared_mutex mutex_;
  std::unordered_map<Key, Value, Hash> map_;
};

/// Memo key for label-indexed transitions.
struct ApplyKey {
  std::uint64_t label;
  std::uint32_t self;
  std::uint32_t agg;
  bool operator==(const ApplyKey &) const = default;
};

struct ApplyKeyHash {
  std::size_t operator()(const ApplyKey &k) const noexcept {
    return std::hash<std::uint64_t>{}(k.label * 0x9e3779b97f4a7c15ULL ^
                                      (std::uint64_t{k.self} << 32 | k.agg));
  }
};

inline std::uint64_t pack(std::uint32_t a, std::uint32_t b) {
  return (std::uint64_t{a} << 32) | b;
}

}  // namespace mpa::detail
