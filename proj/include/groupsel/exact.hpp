#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "groupsel/group_structure.hpp"
#include "groupsel/tree_model.hpp"

namespace groupsel {

// A feasible point of the coverage program: omega over groups, y over
// elements, with y covered by the selected groups and objective = sum of
// selected element weights.
struct Selection {
  std::vector<std::uint8_t> groups;    // omega, size M
  std::vector<std::uint8_t> elements;  // y, size N
  double objective = 0.0;

  std::vector<int> group_indices() const;
  std::vector<int> element_indices() const;
  int num_groups() const;
  int num_elements() const;
};

// Element weights from a signal (w_i = x_i^2).
std::vector<double> squared_weights(const std::vector<double>& x);

struct TopK {
  double total = 0.0;
  std::vector<int> indices;  // chosen elements, ties broken by lowest index
};

// Sum of the min(k,|set|) largest weights in `set`.
TopK top_k_weight(std::span<const int> set, const std::vector<double>& w, int k);

// Greedy weighted-maximum-coverage: G rounds, each adding the group covering
// the most new weight (ties by lowest group id); stops early once no group
// adds weight.
Selection greedy_wmc(const GroupStructure& s, const std::vector<double>& w, int G);

// Rooted forest over group-graph nodes. Node ids are group ids; inactive
// groups have parent -2. Each component is rooted at its lowest group id.
struct GroupForest {
  std::vector<int> parent;                 // size M; -1 root, -2 inactive
  std::vector<std::vector<int>> children;  // size M
  std::vector<int> roots;                  // ascending
};

// Builds the rooted forest induced by `active` (all groups when empty).
// Requires the induced group graph to be acyclic.
GroupForest rooted_group_forest(const GroupStructure& s, const std::vector<int>& active = {});

// Recursive D-value of the subtree rooted at `node`: a single node has D = 1;
// with child-subtree values D1 >= D2 >= ..., the value is max(D1, D2+1).
int dvalue(const GroupForest& f, int node);

// Exploration order {T1, root, T2, ..., TR} with subtrees by non-increasing
// D-value, ties by lowest contained group id; components by root id.
std::vector<int> node_order(const GroupForest& f);

struct DpStats {
  int max_boundary = 0;        // max #explored nodes adjacent to unexplored ones
  std::size_t table_cells = 0;
};

struct DpOptions {
  bool use_condensation = true;  // merging interior indicators; only disabled
                                 // by the equivalence test
  DpStats* stats = nullptr;
};

// Optimal coverage with at most G groups (loopless-pairwise structures).
Selection solve_wmc_dp(const GroupStructure& s, const std::vector<double>& w, int G,
                       DpOptions opts = {});

// Generalized form: at most G groups and at most K elements.
Selection solve_gwmc_dp(const GroupStructure& s, const std::vector<double>& w, int G, int K,
                        DpOptions opts = {});

// One DP run, selections for every budget g = 1..G at fixed K.
std::vector<Selection> solve_gwmc_dp_sweep(const GroupStructure& s, const std::vector<double>& w,
                                           int G, int K, DpOptions opts = {});

// Optimal values f(g) for g = 0..G restricted to `active` groups; internal
// building block for the l0-norm search and the frontier.
std::vector<double> gwmc_dp_values(const GroupStructure& s, const std::vector<int>& active,
                                   const std::vector<double>& w, int G, int K,
                                   DpOptions opts = {});

// Exhaustive oracle over all group subsets of size <= G (M <= 20), then the
// top-K elements of the union.
Selection brute_force_wmc(const GroupStructure& s, const std::vector<double>& w, int G,
                          std::optional<int> K = std::nullopt);

// Oracle values for all budgets g = 0..M at fixed K in one enumeration pass.
std::vector<double> brute_force_wmc_values(const GroupStructure& s, const std::vector<double>& w,
                                           std::optional<int> K = std::nullopt);

struct TreeSelection {
  std::vector<int> nodes;  // ascending; rooted-connected
  double objective = 0.0;
};

// Best rooted-connected subtree with at most K nodes (bottom-up F(X,k,d)).
TreeSelection solve_hierarchical_dp(const TreeModel& t, int K);

// One run, selections for every k = 1..K.
std::vector<TreeSelection> solve_hierarchical_dp_sweep(const TreeModel& t, int K);

// Exhaustive oracle over all rooted-connected subsets (N <= 18).
TreeSelection brute_force_hier(const TreeModel& t, int K);

}  // namespace groupsel
