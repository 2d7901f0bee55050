//
// Project mpa - message-passing automata over labeled trees
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "mpa/errors.hpp"
#include "mpa/symbols.hpp"

namespace mpa {

using NodeId = std::uint32_t;

/// Finite Kripke model: node labels and successor lists. The automaton and
/// GNN simulators run over this; it need not be a tree.
struct KripkeModel {
  std::vector<LabelSet> labels;
  std::vector<std::vector<NodeId>> successors;

  std::size_t size() const { return labels.size(); }
};

/// Node/edge/label table handed to validate_tree. Node ids are 0..n-1.
struct TreeCandidate {
  std::vector<LabelSet> labels;
  std::vector<std::pair<NodeId, NodeId>> edges;  // (parent, child)
};

class TreeValidationError : public Error {
 public:
  enum class Kind { MultipleRoots, Cycle, Unreachable, DuplicateParent, UnknownNode };

  TreeValidationError(Kind kind, std::vector<NodeId> nodes);

  Kind kind() const noexcept { return kind_; }
  const std::vector<NodeId> &nodes() const noexcept { return nodes_; }

 private:
  Kind kind_;
  std::vector<NodeId> nodes_;
};

/// Finite rooted tree with edges root -> leaf. Node ids are dense and assigned
/// in preorder, so the root is always node 0. Immutable after construction.
class RootedTree {
 public:
  /// Single unlabeled node.
  RootedTree();

  static RootedTree validate(const TreeCandidate &candidate);
  /// Builds from a parent array (`parents[root]` empty). Child order follows
  /// increasing node index.
  static RootedTree from_parents(const std::vector<std::optional<NodeId>> &parents,
                                 const std::vector<LabelSet> &labels);

  NodeId root() const noexcept { return 0; }
  std::size_t size() const noexcept { return model_.size(); }

  const KripkeModel &model() const noexcept { return model_; }
  LabelSet label(NodeId v) const { return model_.labels.at(v); }
  const std::vector<NodeId> &children(NodeId v) const {
    return model_.successors.at(v);
  }
  std::optional<NodeId> parent(NodeId v) const { return parent_.at(v); }

  std::size_t node_depth(NodeId v) const { return depth_.at(v); }
  /// Height of v: leaves have height 0.
  std::size_t height(NodeId v) const { return height_.at(v); }
  /// Length of the longest root-leaf path.
  std::size_t depth() const { return height_.at(0); }

  /// Copy with new labels (same shape).
  RootedTree relabeled(std::vector<LabelSet> labels) const;

  /// Structural equality up to child order.
  friend bool operator==(const RootedTree &a, const RootedTree &b);

 private:
  void finish();

  KripkeModel model_;
  std::vector<std::optional<NodeId>> parent_;
  std::vector<std::size_t> depth_;
  std::vector<std::size_t> height_;
};

/// Interpretation of variables: first-order variables map to one node,
/// second-order variables to a node set.
struct Interpretation {
  std::map<std::string, NodeId> first_order;
  std::map<std::string, std::set<NodeId>> second_order;
};

/// Restriction to the nodes at distance <= k from the root.
RootedTree k_prefix(const RootedTree &tree, std::size_t k);

/// Adds `x:NAME` / `X:NAME` labels; original labels are kept.
RootedTree apply_interpretation(const RootedTree &tree,
                                const Interpretation &interp);

}  // namespace mpa
