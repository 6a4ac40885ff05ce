#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "groupsel/exact.hpp"
#include "groupsel/group_structure.hpp"
#include "groupsel/tree_model.hpp"

namespace groupsel {

// Standard-form data of the regularized binary program: variables
// u = [y, omega] (plus a repeated y block when the sparsity penalty is
// present), objective w, constraints C u <= 0 with C = [I_N, -A (, 0_N)],
// box bounds [0,1].
struct BinaryLP {
  int n = 0;  // elements
  int m = 0;  // groups
  double lambda_g = 0.0;
  std::optional<double> lambda_k;
  std::vector<double> objective;              // length n+m, or n+m+n with lambda_k
  std::vector<std::vector<int>> covering;     // per element: groups containing it

  int num_vars() const { return lambda_k ? 2 * n + m : n + m; }
  // Dense constraint table, n rows by num_vars() columns.
  std::vector<std::vector<double>> constraint_matrix() const;
};

BinaryLP standard_form(const GroupStructure& s, const std::vector<double>& w, double lambda_g,
                       std::optional<double> lambda_k = std::nullopt);

struct LpSolution {
  std::vector<double> u;  // structural variables, length num_vars()
  double value = 0.0;
  bool integral = false;  // every coordinate within 1e-9 of {0,1}
};

// Bounded-variable primal simplex (dense, Bland's rule). Returns a vertex of
// the [0,1]-relaxation; integral whenever the constraints are TU.
LpSolution solve_tu_lp(const BinaryLP& lp);

// Same, then maximizes the number of selected groups over the optimal face
// (the tie rule for lambda on a hull-edge slope).
LpSolution solve_tu_lp_max_groups(const BinaryLP& lp);

// Regularized selection (lambda times the number of groups): TU path when a
// certificate holds, exhaustive binary search otherwise (M <= 20). The
// returned objective is the covered weight, without the penalty.
Selection solve_regularized(const GroupStructure& s, const std::vector<double>& w, double lambda);

struct FrontierPoint {
  int budget = 0;       // G (or K for tree frontiers)
  double value = 0.0;   // f(budget)
  bool on_hull = false;
  std::optional<double> lambda;  // a lambda attaining this point, if any
  Selection selection;
};

struct ParetoFrontier {
  std::vector<FrontierPoint> points;
  double total_weight = 0.0;
};

enum class WmcSolver { Dp, Oracle };

// f(G) for G = 1..M with hull membership and attaining lambdas.
ParetoFrontier pareto_frontier(const GroupStructure& s, const std::vector<double>& w,
                               WmcSolver solver);

// f(K) for K = 1..N over rooted-connected subtrees (the §VII-style frontier).
ParetoFrontier pareto_frontier_tree(const TreeModel& t);

// Slopes between consecutive hull vertices perturbed by +-1e-6, plus
// midpoints of adjacent slopes: a grid that attains every strict hull vertex.
std::vector<double> hull_lambda_grid(const ParetoFrontier& f);

std::vector<std::pair<double, Selection>> lambda_sweep(const GroupStructure& s,
                                                       const std::vector<double>& w,
                                                       const std::vector<double>& grid);

}  // namespace groupsel
