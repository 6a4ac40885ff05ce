#pragma once

#include <vector>

namespace groupsel {

// Rooted tree over nodes 0..N-1 with a non-negative weight per node.
// parent[root] == -1. D (max_children) bounds every node's child count.
struct TreeModel {
  std::vector<int> parent;
  std::vector<double> weights;
  std::vector<std::vector<int>> children;
  int root = 0;
  int max_children = 0;

  int size() const { return static_cast<int>(parent.size()); }

  // Validates connectivity/acyclicity and fills children lists and D.
  static TreeModel from_parents(std::vector<int> parent, std::vector<double> weights);

  std::vector<int> ancestors_and_self(int node) const;  // node, parent, ..., root
  std::vector<int> subtree(int node) const;             // node and all descendants
  int depth(int node) const;
};

}  // namespace groupsel
