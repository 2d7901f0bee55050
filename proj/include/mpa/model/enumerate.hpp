//
// Project mpa - message-passing automata over labeled trees
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <functional>
#include <memory>
#include <random>
#include <vector>

#include "mpa/model/tree.hpp"
#include "mpa/multiset.hpp"

namespace mpa {

/// Every rooted tree with at most `max_nodes` nodes and labels drawn from the
/// subsets of `alphabet`, exactly once up to child order. Ordered by size,
/// then by generation order (deterministic).
std::vector<RootedTree> enumerate_trees(std::size_t max_nodes, LabelSet alphabet);

/// Uniform random recursive tree: node v > 0 hangs below a uniformly chosen
/// earlier node; each label is a uniform subset of `alphabet`.
RootedTree random_tree(std::size_t nodes, LabelSet alphabet, std::mt19937_64 &rng);

struct ExtensionCaps {
  /// Levels that may be added below a depth-k node.
  std::size_t max_extra_depth = 1;
  /// Children per added node, and new children per depth-k node.
  std::size_t max_branch = 1;
};

/// Enumerates extensions of a k-prefix: subtrees are attached only below the
/// nodes at distance exactly k. Each depth-k node independently chooses a
/// forest (multiset of at most max_branch bounded subtrees), so the total is
/// options()^|frontier|.
class ExtensionEnumerator {
 public:
  ExtensionEnumerator(const RootedTree &prefix, std::size_t k,
                      ExtensionCaps caps, LabelSet alphabet);
  ~ExtensionEnumerator();
  ExtensionEnumerator(ExtensionEnumerator &&) noexcept;

  const std::vector<NodeId> &frontier() const noexcept { return frontier_; }
  /// Forest choices available to each frontier node.
  std::size_t options() const noexcept;
  SatCount total() const;

  /// The extension with `choice[i]` attached below frontier()[i].
  RootedTree build(const std::vector<std::size_t> &choice) const;
  /// A single node labeled `root_label` with forest `option` attached.
  RootedTree build_local(LabelSet root_label, std::size_t option) const;

  /// Streams every extension; throws BudgetExceeded before yielding anything
  /// if total() > budget. Stops early when `visit` returns false.
  void for_each(std::size_t budget,
                const std::function<bool(const RootedTree &)> &visit) const;

 private:
  struct Shapes;
  RootedTree prefix_;
  std::vector<NodeId> frontier_;
  std::unique_ptr<Shapes> shapes_;
};

/// Convenience wrapper collecting ExtensionEnumerator::for_each.
std::vector<RootedTree> enumerate_extensions(const RootedTree &prefix, std::size_t k,
                                             ExtensionCaps caps, LabelSet alphabet,
                                             std::size_t budget = 1'000'000);

}  // namespace mpa
