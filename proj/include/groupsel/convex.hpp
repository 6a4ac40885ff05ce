#pragma once

#include <vector>

#include "groupsel/group_structure.hpp"
#include "groupsel/tree_model.hpp"

namespace groupsel {

// Per-group components of the latent decomposition: supp(v^j) inside G_j and
// sum_j v^j equal to the reported approximation.
struct Decomposition {
  std::vector<std::vector<double>> components;  // M vectors of length N
  std::vector<double> group_weights;            // d_j
  double lambda = 0.0;
};

struct ConvexResult {
  std::vector<double> approximation;
  Decomposition decomposition;
  std::vector<int> strong_support;  // groups with component norm > eps
  int iterations = 0;
  double final_objective = 0.0;
  std::vector<double> trace;  // objective after each sweep, non-increasing
};

struct LassoOptions {
  double tol = 1e-8;        // max block-norm change for convergence
  int max_sweeps = 100000;  // NonConvergence beyond this
  double support_eps = 1e-6;
};

// min over components  1/2 ||x - sum_j v^j||^2 + lambda * sum_j d_j ||v^j||_2
// by cyclic block soft-thresholding.
ConvexResult latent_group_lasso(const GroupStructure& s, const std::vector<double>& x,
                                double lambda, const std::vector<double>& d,
                                LassoOptions opts = {});

// Exact prox of lambda * sum_j ||x_{subtree(j)}||_2 (descendant groups) via
// one leaf-to-root pass of group soft-thresholding; the support is
// rooted-connected by construction.
ConvexResult hierarchical_group_lasso(const TreeModel& t, const std::vector<double>& x,
                                      double lambda);

// x restricted to the support, zero elsewhere.
std::vector<double> refit_support(const std::vector<double>& x, const std::vector<int>& support);

// Nodes in the support whose parent is absent (root exempt).
int count_hierarchy_violations(const TreeModel& t, const std::vector<int>& support);

}  // namespace groupsel
