#pragma once

#include <cstdint>
#include <vector>

#include "groupsel/exact.hpp"
#include "groupsel/group_structure.hpp"
#include "groupsel/tree_model.hpp"

namespace groupsel {

// Exact nonzero indicator; callers threshold beforehand if they need slack.
std::vector<std::uint8_t> indicator(const std::vector<double>& x);
std::vector<int> support(const std::vector<double>& x);

// Restriction of x to the selection's elements: the best approximation whose
// support lives in the selected cover (||x - x_hat||^2 = ||x||^2 - objective).
std::vector<double> approximate_from_cover(const std::vector<double>& x, const Selection& sel);

// Orthonormal Haar coefficients, laid out [scaling | details coarse->fine];
// the tree links every coefficient to its dyadic parent (scaling at the
// root), with node weights set to the squared coefficients.
struct HaarCoefficients {
  std::vector<double> values;
  TreeModel tree;
  int depth = 0;  // log2(N)
};

HaarCoefficients haar_forward(const std::vector<double>& x);
std::vector<double> haar_inverse(const HaarCoefficients& c);
std::vector<double> haar_inverse_values(const std::vector<double>& values);

// Dyadic parent tree over n coefficient slots (weights zero).
TreeModel haar_tree(int n);

// Deterministic piecewise-constant generator: mt19937_64(seed); breakpoints
// drawn without replacement from {1..n-1} by modulo reduction; integer levels
// in {+-1..+-4}, redrawn while equal to the previous segment.
std::vector<double> gen_piecewise_constant(int n, int pieces, std::uint64_t seed);

// Group per node: the node and all its ancestors (M = N).
GroupStructure hierarchy_groups(const TreeModel& t);

// One group per tree edge {parent, child}, plus the {root} singleton.
GroupStructure parent_child_groups(const TreeModel& t);

}  // namespace groupsel
