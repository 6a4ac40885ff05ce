#include <algorithm>
#include <bit>
#include <cmath>
#include <set>

#include "groupsel/errors.hpp"
#include "groupsel/relax.hpp"
#include "groupsel/simd_kernels.hpp"

namespace groupsel {

namespace {

// Canonical y: covered elements carrying positive weight. Zero-weight
// coordinates are coverable but left unselected for determinism.
Selection selection_from_groups(const GroupStructure& s, const std::vector<double>& w,
                                const std::vector<std::uint8_t>& groups) {
  Selection sel;
  sel.groups = groups;
  sel.elements.assign(s.ground_size, 0);
  for (int j = 0; j < s.num_groups(); ++j)
    if (groups[j])
      for (int i : s.groups[j])
        if (w[i] > 0.0) sel.elements[i] = 1;
  for (int i = 0; i < s.ground_size; ++i)
    if (sel.elements[i]) sel.objective += w[i];
  return sel;
}

Selection solve_regularized_brute(const GroupStructure& s, const std::vector<double>& w,
                                  double lambda) {
  const int m = s.num_groups();
  if (m > 20) fail(Errc::instance_too_large, "no TU certificate and more than 20 groups");
  double best = -1.0;
  int best_count = -1;
  std::vector<std::uint8_t> best_groups(m, 0);
  for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
    std::vector<std::uint8_t> covered(s.ground_size, 0);
    for (int j = 0; j < m; ++j)
      if (mask & (1u << j))
        for (int i : s.groups[j]) covered[i] = 1;
    double value = -lambda * std::popcount(mask);
    for (int i = 0; i < s.ground_size; ++i)
      if (covered[i] && w[i] > 0.0) value += w[i];
    int count = std::popcount(mask);
    // Ties at a hull-edge slope resolve to the larger group count.
    if (value > best + 1e-9 || (value > best - 1e-9 && count > best_count)) {
      best = value;
      best_count = count;
      for (int j = 0; j < m; ++j) best_groups[j] = (mask >> j) & 1u;
    }
  }
  return selection_from_groups(s, w, best_groups);
}

}  // namespace

Selection solve_regularized(const GroupStructure& s, const std::vector<double>& w, double lambda) {
  if (lambda <= 0.0) fail(Errc::budget_out_of_range, "lambda must be positive");
  if (static_cast<int>(w.size()) != s.ground_size)
    fail(Errc::dimension_mismatch, "weight vector length does not match ground size");

  if (tu_certificate(s) == TuCertificate::Unknown) return solve_regularized_brute(s, w, lambda);

  BinaryLP lp = standard_form(s, w, lambda);
  LpSolution sol = solve_tu_lp_max_groups(lp);
  if (!sol.integral)
    fail(Errc::fractional_solution,
         "TU-certified structure produced a fractional vertex (certificate bug)");
  std::vector<std::uint8_t> groups(s.num_groups(), 0);
  for (int j = 0; j < s.num_groups(); ++j) groups[j] = std::lround(sol.u[lp.n + j]) != 0 ? 1 : 0;
  return selection_from_groups(s, w, groups);
}

namespace {

double cross(double ox, double oy, double ax, double ay, double bx, double by) {
  return (ax - ox) * (by - oy) - (ay - oy) * (bx - ox);
}

// Upper concave envelope over {(0,0)} u {(budget, value)}; marks points on
// the envelope and assigns attaining lambdas by exact scalarization over the
// frontier values with the larger-budget tie rule.
void mark_hull_and_lambdas(ParetoFrontier& f) {
  const int m = static_cast<int>(f.points.size());
  std::vector<double> fx(m + 1, 0.0), fy(m + 1, 0.0);
  for (int g = 1; g <= m; ++g) {
    fx[g] = f.points[g - 1].budget;
    fy[g] = f.points[g - 1].value;
  }

  // Monotone chain, strict right turns only: hull vertices.
  std::vector<int> hull;
  for (int g = 0; g <= m; ++g) {
    while (hull.size() >= 2 &&
           cross(fx[hull[hull.size() - 2]], fy[hull[hull.size() - 2]], fx[hull.back()],
                 fy[hull.back()], fx[g], fy[g]) >= -1e-12)
      hull.pop_back();
    hull.push_back(g);
  }

  // A point is hull-flagged iff it lies on the envelope (vertex, or within
  // the 1e-9 cross tolerance of its bracketing hull segment).
  for (int g = 1; g <= m; ++g) {
    auto it = std::upper_bound(hull.begin(), hull.end(), g);
    bool on;
    if (std::find(hull.begin(), hull.end(), g) != hull.end()) {
      on = true;
    } else {
      int right = *it;
      int left = *(it - 1);
      on = std::fabs(cross(fx[left], fy[left], fx[right], fy[right], fx[g], fy[g])) <= 1e-9;
    }
    f.points[g - 1].on_hull = on;
  }

  // Attaining lambdas from the hull grid.
  std::vector<double> grid = hull_lambda_grid(f);
  for (double lambda : grid) {
    double best = 0.0;
    int best_g = 0;
    for (int g = 0; g <= m; ++g) {
      double v = fy[g] - lambda * fx[g];
      if (v >= best - 1e-12) {  // ties resolve to the larger budget
        if (v > best + 1e-12 || fx[g] > fx[best_g]) {
          best = std::max(best, v);
          best_g = g;
        }
      }
    }
    if (best_g >= 1 && !f.points[best_g - 1].lambda) f.points[best_g - 1].lambda = lambda;
  }
}

}  // namespace

std::vector<double> hull_lambda_grid(const ParetoFrontier& f) {
  const int m = static_cast<int>(f.points.size());
  std::vector<double> fx(m + 1, 0.0), fy(m + 1, 0.0);
  for (int g = 1; g <= m; ++g) {
    fx[g] = f.points[g - 1].budget;
    fy[g] = f.points[g - 1].value;
  }
  std::vector<int> hull;
  for (int g = 0; g <= m; ++g) {
    while (hull.size() >= 2 &&
           cross(fx[hull[hull.size() - 2]], fy[hull[hull.size() - 2]], fx[hull.back()],
                 fy[hull.back()], fx[g], fy[g]) >= -1e-12)
      hull.pop_back();
    hull.push_back(g);
  }
  std::vector<double> slopes;
  for (std::size_t t = 1; t < hull.size(); ++t)
    slopes.push_back((fy[hull[t]] - fy[hull[t - 1]]) / (fx[hull[t]] - fx[hull[t - 1]]));

  std::set<double> grid;
  for (std::size_t t = 0; t < slopes.size(); ++t) {
    grid.insert(slopes[t] - 1e-6);
    grid.insert(slopes[t] + 1e-6);
    if (t + 1 < slopes.size()) grid.insert(0.5 * (slopes[t] + slopes[t + 1]));
  }
  if (!slopes.empty()) grid.insert(0.5 * slopes.back());  // below the last slope
  std::vector<double> out;
  for (double v : grid)
    if (v > 0.0) out.push_back(v);
  return out;
}

ParetoFrontier pareto_frontier(const GroupStructure& s, const std::vector<double>& w,
                               WmcSolver solver) {
  ParetoFrontier f;
  f.total_weight = kern::sum(w.data(), w.size());
  const int m = s.num_groups();
  std::vector<Selection> sels;
  if (solver == WmcSolver::Dp) {
    sels = solve_gwmc_dp_sweep(s, w, m, s.ground_size);
  } else {
    sels.reserve(m);
    for (int g = 1; g <= m; ++g) sels.push_back(brute_force_wmc(s, w, g));
  }
  for (int g = 1; g <= m; ++g) {
    FrontierPoint p;
    p.budget = g;
    p.value = sels[g - 1].objective;
    p.selection = std::move(sels[g - 1]);
    f.points.push_back(std::move(p));
  }
  mark_hull_and_lambdas(f);
  return f;
}

ParetoFrontier pareto_frontier_tree(const TreeModel& t) {
  ParetoFrontier f;
  f.total_weight = kern::sum(t.weights.data(), t.weights.size());
  const int n = t.size();
  std::vector<TreeSelection> sweep = solve_hierarchical_dp_sweep(t, n);
  for (int k = 1; k <= n; ++k) {
    FrontierPoint p;
    p.budget = k;
    p.value = sweep[k - 1].objective;
    p.selection.groups.assign(n, 0);
    p.selection.elements.assign(n, 0);
    for (int v : sweep[k - 1].nodes) {
      p.selection.groups[v] = 1;
      p.selection.elements[v] = 1;
    }
    p.selection.objective = sweep[k - 1].objective;
    f.points.push_back(std::move(p));
  }
  mark_hull_and_lambdas(f);
  return f;
}

std::vector<std::pair<double, Selection>> lambda_sweep(const GroupStructure& s,
                                                       const std::vector<double>& w,
                                                       const std::vector<double>& grid) {
  if (grid.empty()) fail(Errc::budget_out_of_range, "lambda grid must be non-empty");
  std::vector<std::pair<double, Selection>> out;
  out.reserve(grid.size());
  for (double lambda : grid) out.emplace_back(lambda, solve_regularized(s, w, lambda));
  return out;
}

}  // namespace groupsel
