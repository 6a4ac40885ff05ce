#include "groupsel/experiment.hpp"

#include <algorithm>
#include <cmath>

#include "groupsel/convex.hpp"
#include "groupsel/errors.hpp"
#include "groupsel/simd_kernels.hpp"

namespace groupsel {

std::vector<double> default_lambda_grid() {
  // Log-spaced from deep shrinkage to none; wide enough to sweep the whole
  // sparsity range of an N=64 signal with unit-scale levels.
  std::vector<double> grid;
  const int count = 48;
  const double lo = std::log10(1e-3), hi = std::log10(40.0);
  for (int t = 0; t < count; ++t)
    grid.push_back(std::pow(10.0, lo + (hi - lo) * t / (count - 1)));
  return grid;
}

HaarExperimentResult run_haar_experiment(const HaarExperimentConfig& cfg) {
  HaarExperimentResult res;
  res.signal = gen_piecewise_constant(cfg.n, cfg.pieces, cfg.seed);
  res.coeffs = haar_forward(res.signal);
  const auto& c = res.coeffs.values;
  const int n = cfg.n;
  const double total = kern::sum_squares(c.data(), c.size());

  res.dp_frontier = pareto_frontier_tree(res.coeffs.tree);
  for (const auto& p : res.dp_frontier.points) {
    ExperimentRow row;
    row.method = "dp";
    row.k = p.budget;
    row.error = std::max(0.0, total - p.value);
    res.rows.push_back(std::move(row));
  }

  auto refit_error = [&](const std::vector<int>& supp) {
    double kept = 0.0;
    for (int i : supp) kept += c[i] * c[i];
    return std::max(0.0, total - kept);
  };

  const std::vector<double> hier_grid = cfg.hier_grid.empty() ? default_lambda_grid() : cfg.hier_grid;
  for (double lambda : hier_grid) {
    ConvexResult r = hierarchical_group_lasso(res.coeffs.tree, c, lambda);
    std::vector<int> supp = support(r.approximation);
    if (supp.empty()) continue;
    ExperimentRow row;
    row.method = "hierarchical_gl";
    row.k = static_cast<int>(supp.size());
    row.error = refit_error(supp);
    row.violations = count_hierarchy_violations(res.coeffs.tree, supp);
    row.lambda = lambda;
    res.rows.push_back(std::move(row));
  }

  GroupStructure pc = parent_child_groups(res.coeffs.tree);
  std::vector<double> unit(pc.num_groups(), 1.0);
  const std::vector<double> latent_grid =
      cfg.latent_grid.empty() ? default_lambda_grid() : cfg.latent_grid;
  for (double lambda : latent_grid) {
    ConvexResult r = latent_group_lasso(pc, c, lambda, unit);
    std::vector<int> supp;
    for (int i = 0; i < n; ++i)
      if (std::fabs(r.approximation[i]) > 1e-6) supp.push_back(i);
    if (supp.empty()) continue;
    ExperimentRow row;
    row.method = "latent_gl";
    row.k = static_cast<int>(supp.size());
    row.error = refit_error(supp);
    row.violations = count_hierarchy_violations(res.coeffs.tree, supp);
    row.lambda = lambda;
    res.rows.push_back(std::move(row));
  }
  return res;
}

}  // namespace groupsel
