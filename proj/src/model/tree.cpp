//
// Project mpa - message-passing automata over labeled trees
// SPDX-License-Identifier: Apache-2.0
//

#include "mpa/model/tree.hpp"

#include <algorithm>

#include "mpa/model/tree_io.hpp"

namespace mpa {
namespace {

const char *kind_name(TreeValidationError::Kind k) {
  switch (k) {
    case TreeValidationError::Kind::MultipleRoots: return "MultipleRoots";
    case TreeValidationError::Kind::Cycle: return "Cycle";
    case TreeValidationError::Kind::Unreachable: return "Unreachable";
    case TreeValidationError::Kind::DuplicateParent: return "DuplicateParent";
    case TreeValidationError::Kind::UnknownNode: return "UnknownNode";
  }
  return "?";
}

std::string describe(TreeValidationError::Kind k, const std::vector<NodeId> &nodes) {
  std::string s = std::string(kind_name(k)) + ": nodes";
  for (auto v : nodes) s += " " + std::to_string(v);
  return s;
}

}  // namespace

TreeValidationError::TreeValidationError(Kind kind, std::vector<NodeId> nodes)
    : Error(describe(kind, nodes)), kind_(kind), nodes_(std::move(nodes)) {}

RootedTree::RootedTree() {
  model_.labels.assign(1, LabelSet{});
  model_.successors.assign(1, {});
  parent_.assign(1, std::nullopt);
  finish();
}

RootedTree RootedTree::validate(const TreeCandidate &c) {
  using Kind = TreeValidationError::Kind;
  const auto n = c.labels.size();
  if (n == 0) throw TreeValidationError(Kind::Unreachable, {});

  std::vector<std::vector<NodeId>> parents(n), kids(n);
  for (auto [p, ch] : c.edges) {
    if (p >= n || ch >= n)
      throw TreeValidationError(Kind::UnknownNode, {p >= n ? p : ch});
    parents[ch].push_back(p);
    kids[p].push_back(ch);
  }

  std::vector<NodeId> roots;
  for (NodeId v = 0; v < n; ++v)
    if (parents[v].empty()) roots.push_back(v);
  if (roots.size() > 1) throw TreeValidationError(Kind::MultipleRoots, roots);

  // Cycle search over the edge relation (iterative three-colour DFS).
  {
    std::vector<int> colour(n, 0);
    std::vector<NodeId> path;
    for (NodeId s = 0; s < n; ++s) {
      if (colour[s] != 0) continue;
      std::vector<std::pair<NodeId, std::size_t>> stack{{s, 0}};
      colour[s] = 1;
      path.assign(1, s);
      while (!stack.empty()) {
        auto &[v, i] = stack.back();
        if (i < kids[v].size()) {
          NodeId w = kids[v][i++];
          if (colour[w] == 1) {
            auto it = std::find(path.begin(), path.end(), w);
            std::vector<NodeId> cyc(it, path.end());
            std::sort(cyc.begin(), cyc.end());
            throw TreeValidationError(Kind::Cycle, cyc);
          }
          if (colour[w] == 0) {
            colour[w] = 1;
            stack.emplace_back(w, 0);
            path.push_back(w);
          }
        } else {
          colour[v] = 2;
          stack.pop_back();
          path.pop_back();
        }
      }
    }
  }
  if (roots.empty()) throw TreeValidationError(Kind::Cycle, {});

  std::vector<NodeId> dup;
  for (NodeId v = 0; v < n; ++v)
    if (parents[v].size() > 1) dup.push_back(v);
  if (!dup.empty()) throw TreeValidationError(Kind::DuplicateParent, dup);

  // Preorder renumbering from the root.
  std::vector<NodeId> order;
  std::vector<NodeId> stack{roots[0]};
  std::vector<bool> seen(n, false);
  while (!stack.empty()) {
    NodeId v = stack.back();
    stack.pop_back();
    seen[v] = true;
    order.push_back(v);
    for (auto it = kids[v].rbegin(); it != kids[v].rend(); ++it) stack.push_back(*it);
  }
  if (order.size() != n) {
    std::vector<NodeId> missing;
    for (NodeId v = 0; v < n; ++v)
      if (!seen[v]) missing.push_back(v);
    throw TreeValidationError(Kind::Unreachable, missing);
  }

  std::vector<NodeId> new_id(n);
  for (NodeId i = 0; i < n; ++i) new_id[order[i]] = i;

  RootedTree t;
  t.model_.labels.resize(n);
  t.model_.successors.assign(n, {});
  t.parent_.assign(n, std::nullopt);
  for (NodeId old = 0; old < n; ++old) {
    NodeId v = new_id[old];
    t.model_.labels[v] = c.labels[old];
    for (auto ch : kids[old]) {
      t.model_.successors[v].push_back(new_id[ch]);
      t.parent_[new_id[ch]] = v;
    }
  }
  t.finish();
  return t;
}

RootedTree RootedTree::from_parents(
    const std::vector<std::optional<NodeId>> &parents,
    const std::vector<LabelSet> &labels) {
  TreeCandidate c;
  c.labels = labels;
  for (NodeId v = 0; v < parents.size(); ++v)
    if (parents[v]) c.edges.emplace_back(*parents[v], v);
  return validate(c);
}

void RootedTree::finish() {
  const auto n = model_.size();
  depth_.assign(n, 0);
  height_.assign(n, 0);
  // Preorder ids: parents precede children.
  for (NodeId v = 1; v < n; ++v) depth_[v] = depth_[*parent_[v]] + 1;
  for (NodeId v = static_cast<NodeId>(n); v-- > 0;)
    for (auto ch : model_.successors[v])
      height_[v] = std::max(height_[v], height_[ch] + 1);
}

RootedTree RootedTree::relabeled(std::vector<LabelSet> labels) const {
  if (labels.size() != size()) throw Error("relabeled: label count mismatch");
  RootedTree t = *this;
  t.model_.labels = std::move(labels);
  return t;
}

bool operator==(const RootedTree &a, const RootedTree &b) {
  return a.size() == b.size() && serialize_tree(a) == serialize_tree(b);
}

RootedTree k_prefix(const RootedTree &tree, std::size_t k) {
  std::vector<std::optional<NodeId>> parents;
  std::vector<LabelSet> labels;
  std::vector<NodeId> new_id(tree.size(), 0);
  for (NodeId v = 0; v < tree.size(); ++v) {
    if (tree.node_depth(v) > k) continue;
    new_id[v] = static_cast<NodeId>(labels.size());
    labels.push_back(tree.label(v));
    auto p = tree.parent(v);
    parents.push_back(p ? std::optional<NodeId>(new_id[*p]) : std::nullopt);
  }
  return RootedTree::from_parents(parents, labels);
}

RootedTree apply_interpretation(const RootedTree &tree,
                                const Interpretation &interp) {
  auto labels = tree.model().labels;
  auto check = [&](NodeId v) {
    if (v >= tree.size())
      throw UnknownNode("interpretation names node " + std::to_string(v) +
                        " outside a tree of " + std::to_string(tree.size()) +
                        " nodes");
  };
  for (auto &[var, v] : interp.first_order) {
    check(v);
    labels[v] = labels[v].with(fo_symbol(var));
  }
  for (auto &[var, nodes] : interp.second_order) {
    auto s = so_symbol(var);
    for (auto v : nodes) {
      check(v);
      labels[v] = labels[v].with(s);
    }
  }
  return tree.relabeled(std::move(labels));
}

}  // namespace mpa
