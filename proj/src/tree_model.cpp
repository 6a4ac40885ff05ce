#include "groupsel/tree_model.hpp"

#include <algorithm>

#include "groupsel/errors.hpp"

namespace groupsel {

TreeModel TreeModel::from_parents(std::vector<int> parent, std::vector<double> weights) {
  const int n = static_cast<int>(parent.size());
  if (n == 0) fail(Errc::dimension_mismatch, "tree must have at least one node");
  if (weights.empty()) weights.assign(n, 0.0);
  if (static_cast<int>(weights.size()) != n)
    fail(Errc::dimension_mismatch, "weights length does not match node count");

  TreeModel t;
  t.parent = std::move(parent);
  t.weights = std::move(weights);
  t.children.assign(n, {});
  t.root = -1;
  for (int v = 0; v < n; ++v) {
    int p = t.parent[v];
    if (p == -1) {
      if (t.root != -1) fail(Errc::parse_error, "tree has more than one root");
      t.root = v;
    } else if (p < 0 || p >= n) {
      fail(Errc::index_out_of_range, "parent link out of range");
    } else {
      t.children[p].push_back(v);
    }
  }
  if (t.root == -1) fail(Errc::parse_error, "tree has no root");

  // Reject cycles / disconnected nodes: every node must reach the root.
  for (int v = 0; v < n; ++v) {
    int steps = 0;
    for (int u = v; u != t.root; u = t.parent[u])
      if (++steps > n) fail(Errc::parse_error, "parent links contain a cycle");
  }

  t.max_children = 0;
  for (auto& c : t.children) t.max_children = std::max(t.max_children, static_cast<int>(c.size()));
  return t;
}

std::vector<int> TreeModel::ancestors_and_self(int node) const {
  std::vector<int> out;
  for (int u = node;; u = parent[u]) {
    out.push_back(u);
    if (u == root) break;
  }
  return out;
}

std::vector<int> TreeModel::subtree(int node) const {
  std::vector<int> out, stack{node};
  while (!stack.empty()) {
    int u = stack.back();
    stack.pop_back();
    out.push_back(u);
    for (int c : children[u]) stack.push_back(c);
  }
  std::sort(out.begin(), out.end());
  return out;
}

int TreeModel::depth(int node) const {
  int d = 0;
  for (int u = node; u != root; u = parent[u]) ++d;
  return d;
}

}  // namespace groupsel
