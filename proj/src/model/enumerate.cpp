//
// Project mpa - message-passing automata over labeled trees
// SPDX-License-Identifier: Apache-2.0
//

#include "mpa/model/enumerate.hpp"

#include <functional>

namespace mpa {
namespace {

/// Canonical shape list: shape i's children are indices < i, stored in
/// non-increasing order so every multiset of children appears once.
struct ShapeList {
  struct Shape {
    LabelSet label;
    std::vector<std::uint32_t> kids;
    std::size_t size;
    std::size_t depth;
  };
  std::vector<Shape> shapes;

  /// Appends to `parent_of`/`labels` in preorder.
  void emit(std::uint32_t idx, std::optional<NodeId> parent,
            std::vector<std::optional<NodeId>> &parents,
            std::vector<LabelSet> &labels) const {
    auto id = static_cast<NodeId>(labels.size());
    parents.push_back(parent);
    labels.push_back(shapes[idx].label);
    for (auto k : shapes[idx].kids) emit(k, id, parents, labels);
  }

  RootedTree to_tree(std::uint32_t idx) const {
    std::vector<std::optional<NodeId>> parents;
    std::vector<LabelSet> labels;
    emit(idx, std::nullopt, parents, labels);
    return RootedTree::from_parents(parents, labels);
  }
};

/// Calls `out` with each non-increasing index sequence drawn from
/// [0, limit) whose `weight` sum is exactly `remaining` and length <= max_len.
void multisets_by_weight(std::size_t remaining, std::uint32_t limit,
                         const std::function<std::size_t(std::uint32_t)> &weight,
                         std::vector<std::uint32_t> &cur,
                         const std::function<void(const std::vector<std::uint32_t> &)> &out) {
  if (remaining == 0) {
    out(cur);
    return;
  }
  for (std::uint32_t i = limit; i-- > 0;) {
    auto w = weight(i);
    if (w > remaining) continue;
    cur.push_back(i);
    multisets_by_weight(remaining - w, i + 1, weight, cur, out);
    cur.pop_back();
  }
}

/// Non-increasing sequences of length <= max_len over [0, limit).
void multisets_by_length(std::size_t max_len, std::uint32_t limit,
                         std::vector<std::uint32_t> &cur,
                         const std::function<void(const std::vector<std::uint32_t> &)> &out) {
  out(cur);
  if (cur.size() == max_len) return;
  std::uint32_t top = cur.empty() ? limit : cur.back() + 1;
  for (std::uint32_t i = top; i-- > 0;) {
    cur.push_back(i);
    multisets_by_length(max_len, limit, cur, out);
    cur.pop_back();
  }
}

}  // namespace

std::vector<RootedTree> enumerate_trees(std::size_t max_nodes, LabelSet alphabet) {
  if (max_nodes == 0) throw Error("enumerate_trees: max_nodes must be >= 1");
  ShapeList list;
  auto label_sets = alphabet.subsets();
  std::vector<std::size_t> first_of_size(max_nodes + 2, 0);
  for (std::size_t n = 1; n <= max_nodes; ++n) {
    first_of_size[n] = list.shapes.size();
    auto limit = static_cast<std::uint32_t>(list.shapes.size());
    std::vector<std::vector<std::uint32_t>> kid_sets;
    std::vector<std::uint32_t> cur;
    multisets_by_weight(
        n - 1, limit, [&](std::uint32_t i) { return list.shapes[i].size; }, cur,
        [&](const std::vector<std::uint32_t> &ks) { kid_sets.push_back(ks); });
    for (auto &ks : kid_sets)
      for (auto l : label_sets) {
        std::size_t d = 0;
        for (auto k : ks) d = std::max(d, list.shapes[k].depth + 1);
        list.shapes.push_back({l, ks, n, d});
      }
  }
  std::vector<RootedTree> out;
  out.reserve(list.shapes.size());
  for (std::uint32_t i = 0; i < list.shapes.size(); ++i) out.push_back(list.to_tree(i));
  return out;
}

struct ExtensionEnumerator::Shapes {
  ShapeList list;
  /// Each option is a forest: a non-increasing list of shape indices.
  std::vector<std::vector<std::uint32_t>> forests;
};

RootedTree random_tree(std::size_t nodes, LabelSet alphabet, std::mt19937_64 &rng) {
  if (nodes == 0) throw Error("a tree needs at least one node");
  auto subsets = alphabet.subsets();
  std::vector<std::optional<NodeId>> parents{std::nullopt};
  std::vector<LabelSet> labels;
  for (std::size_t v = 1; v < nodes; ++v)
    parents.push_back(static_cast<NodeId>(std::uniform_int_distribution<std::size_t>(0, v - 1)(rng)));
  std::uniform_int_distribution<std::size_t> pick(0, subsets.size() - 1);
  for (std::size_t v = 0; v < nodes; ++v) labels.push_back(subsets[pick(rng)]);
  return RootedTree::from_parents(parents, labels);
}

ExtensionEnumerator::ExtensionEnumerator(const RootedTree &prefix, std::size_t k,
                                         ExtensionCaps caps, LabelSet alphabet)
    : prefix_(prefix), shapes_(std::make_unique<Shapes>()) {
  if (prefix.depth() > k)
    throw Error("enumerate_extensions: prefix deeper than k");
  for (NodeId v = 0; v < prefix.size(); ++v)
    if (prefix.node_depth(v) == k) frontier_.push_back(v);

  auto &list = shapes_->list;
  auto label_sets = alphabet.subsets();
  // Bounded shapes of depth <= max_extra_depth - 1, built level by level.
  if (caps.max_extra_depth > 0) {
    for (std::size_t d = 0; d < caps.max_extra_depth; ++d) {
      auto limit = static_cast<std::uint32_t>(list.shapes.size());
      std::vector<std::vector<std::uint32_t>> kid_sets;
      std::vector<std::uint32_t> cur;
      if (d == 0) {
        kid_sets.emplace_back();
      } else {
        multisets_by_length(caps.max_branch, limit, cur,
                            [&](const std::vector<std::uint32_t> &ks) {
                              // Only shapes reaching depth exactly d are new.
                              std::size_t dd = 0;
                              for (auto x : ks) dd = std::max(dd, list.shapes[x].depth + 1);
                              if (!ks.empty() && dd == d) kid_sets.push_back(ks);
                            });
      }
      for (auto &ks : kid_sets)
        for (auto l : label_sets) {
          std::size_t size = 1;
          for (auto x : ks) size += list.shapes[x].size;
          list.shapes.push_back({l, ks, size, d});
        }
    }
  }
  std::vector<std::uint32_t> cur;
  multisets_by_length(caps.max_branch, static_cast<std::uint32_t>(list.shapes.size()),
                      cur, [&](const std::vector<std::uint32_t> &f) {
                        shapes_->forests.push_back(f);
                      });
}

ExtensionEnumerator::~ExtensionEnumerator() = default;
ExtensionEnumerator::ExtensionEnumerator(ExtensionEnumerator &&) noexcept = default;

std::size_t ExtensionEnumerator::options() const noexcept {
  return shapes_->forests.size();
}

SatCount ExtensionEnumerator::total() const {
  SatCount t{1};
  for (std::size_t i = 0; i < frontier_.size(); ++i) t = t * SatCount{options()};
  return t;
}

RootedTree ExtensionEnumerator::build(const std::vector<std::size_t> &choice) const {
  std::vector<std::optional<NodeId>> parents;
  std::vector<LabelSet> labels;
  for (NodeId v = 0; v < prefix_.size(); ++v) {
    parents.push_back(prefix_.parent(v));
    labels.push_back(prefix_.label(v));
  }
  for (std::size_t i = 0; i < frontier_.size(); ++i)
    for (auto s : shapes_->forests.at(choice.at(i)))
      shapes_->list.emit(s, frontier_[i], parents, labels);
  return RootedTree::from_parents(parents, labels);
}

RootedTree ExtensionEnumerator::build_local(LabelSet root_label, std::size_t option) const {
  std::vector<std::optional<NodeId>> parents{std::nullopt};
  std::vector<LabelSet> labels{root_label};
  for (auto s : shapes_->forests.at(option)) shapes_->list.emit(s, 0, parents, labels);
  return RootedTree::from_parents(parents, labels);
}

void ExtensionEnumerator::for_each(
    std::size_t budget, const std::function<bool(const RootedTree &)> &visit) const {
  auto t = total();
  if (t.value > budget)
    throw BudgetExceeded("enumerate_extensions: " + t.to_string() +
                         " extensions exceed budget " + std::to_string(budget));
  std::vector<std::size_t> choice(frontier_.size(), 0);
  while (true) {
    if (!visit(build(choice))) return;
    std::size_t i = 0;
    while (i < choice.size() && ++choice[i] == options()) choice[i++] = 0;
    if (i == choice.size()) return;
  }
}

std::vector<RootedTree> enumerate_extensions(const RootedTree &prefix, std::size_t k,
                                             ExtensionCaps caps, LabelSet alphabet,
                                             std::size_t budget) {
  std::vector<RootedTree> out;
  ExtensionEnumerator(prefix, k, caps, alphabet).for_each(budget, [&](const RootedTree &t) {
    out.push_back(t);
    return true;
  });
  return out;
}

}  // namespace mpa
