#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "groupsel/convex.hpp"
#include "groupsel/errors.hpp"
#include "groupsel/signals.hpp"
#include "test_support.hpp"

using namespace groupsel;

namespace {

double group_norm(const std::vector<double>& v, const std::vector<int>& idx) {
  double acc = 0.0;
  for (int i : idx) acc += v[i] * v[i];
  return std::sqrt(acc);
}

double hier_objective(const TreeModel& t, const std::vector<double>& x,
                      const std::vector<double>& z, double lambda) {
  double obj = 0.0;
  for (int i = 0; i < t.size(); ++i) obj += 0.5 * (x[i] - z[i]) * (x[i] - z[i]);
  for (int v = 0; v < t.size(); ++v) obj += lambda * group_norm(z, t.subtree(v));
  return obj;
}

// ADMM oracle for the prox of the descendant-group penalty: splits each
// group slice into its own block with a consensus constraint.
std::vector<double> admm_prox_oracle(const TreeModel& t, const std::vector<double>& x,
                                     double lambda, int iters) {
  const int n = t.size();
  std::vector<std::vector<int>> groups(n);
  std::vector<int> cover_count(n, 0);
  for (int v = 0; v < n; ++v) {
    groups[v] = t.subtree(v);
    for (int i : groups[v]) ++cover_count[i];
  }
  const double rho = 1.0;
  std::vector<double> z = x;
  std::vector<std::vector<double>> tblk(n), ublk(n);
  for (int v = 0; v < n; ++v) {
    tblk[v].assign(groups[v].size(), 0.0);
    ublk[v].assign(groups[v].size(), 0.0);
  }
  std::vector<double> best_z = z;
  double best_obj = hier_objective(t, x, z, lambda);
  for (int it = 0; it < iters; ++it) {
    for (int v = 0; v < n; ++v) {
      double norm = 0.0;
      std::vector<double> arg(groups[v].size());
      for (std::size_t s = 0; s < groups[v].size(); ++s) {
        arg[s] = z[groups[v][s]] + ublk[v][s];
        norm += arg[s] * arg[s];
      }
      norm = std::sqrt(norm);
      double factor = norm > lambda / rho ? 1.0 - (lambda / rho) / norm : 0.0;
      for (std::size_t s = 0; s < groups[v].size(); ++s) tblk[v][s] = factor * arg[s];
    }
    std::vector<double> accum(n, 0.0);
    for (int v = 0; v < n; ++v)
      for (std::size_t s = 0; s < groups[v].size(); ++s)
        accum[groups[v][s]] += tblk[v][s] - ublk[v][s];
    for (int i = 0; i < n; ++i) z[i] = (x[i] + rho * accum[i]) / (1.0 + rho * cover_count[i]);
    for (int v = 0; v < n; ++v)
      for (std::size_t s = 0; s < groups[v].size(); ++s)
        ublk[v][s] += z[groups[v][s]] - tblk[v][s];
    double obj = hier_objective(t, x, z, lambda);
    if (obj < best_obj) {
      best_obj = obj;
      best_z = z;
    }
  }
  return best_z;
}

}  // namespace

TEST_CASE("latent group lasso shrinks everything for large lambda") {
  GroupStructure vi = ts::case_study_structure();
  std::vector<double> x = ts::case_study_signal();
  std::vector<double> d(3, 1.0);
  ConvexResult r = latent_group_lasso(vi, x, 100.0, d);
  CHECK(r.strong_support.empty());
  for (double v : r.approximation) CHECK(std::fabs(v) <= 1e-12);
}

TEST_CASE("latent group lasso recovers the case-study thresholds") {
  GroupStructure vi = ts::case_study_structure();
  std::vector<double> x = ts::case_study_signal();

  // Unit weights: all three groups survive at every small lambda where the
  // approximation is nonzero.
  bool saw_nonzero = false;
  for (double lambda : {0.02, 0.05, 0.1, 0.2, 0.4}) {
    ConvexResult r = latent_group_lasso(vi, x, lambda, {1, 1, 1});
    if (r.strong_support.empty()) continue;
    saw_nonzero = true;
    CHECK(r.strong_support == std::vector<int>{0, 1, 2});
  }
  CHECK(saw_nonzero);

  // Weighting the middle group above 2/sqrt(3) excludes it for some lambda.
  bool excluded = false;
  for (double lambda : {0.02, 0.05, 0.1, 0.2, 0.4, 0.8, 1.2}) {
    ConvexResult r = latent_group_lasso(vi, x, lambda, {1, 1.2, 1});
    if (r.strong_support == std::vector<int>{0, 2}) excluded = true;
  }
  CHECK(excluded);

  // At 1.0 (below the threshold) the same sweep keeps the middle group
  // whenever anything survives.
  for (double lambda : {0.02, 0.05, 0.1, 0.2}) {
    ConvexResult r = latent_group_lasso(vi, x, lambda, {1, 1.0, 1});
    if (!r.strong_support.empty()) CHECK(r.strong_support == std::vector<int>{0, 1, 2});
  }
}

TEST_CASE("latent group lasso invariants") {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 6; ++t) {
    auto inst = ts::random_loopless(rng, 6, 18, false);
    const int n = inst.s.ground_size, m = inst.s.num_groups();
    std::vector<double> x(n);
    for (double& v : x) v = static_cast<double>(static_cast<int>(rng() % 9)) - 4.0;
    std::vector<double> d(m);
    for (double& v : d) v = 0.5 + static_cast<double>(rng() % 100) / 100.0;
    double lambda = 0.05 + static_cast<double>(rng() % 100) / 150.0;

    ConvexResult r = latent_group_lasso(inst.s, x, lambda, d);

    // Components respect their group supports and sum to the approximation.
    std::vector<double> sum(n, 0.0);
    for (int j = 0; j < m; ++j) {
      for (int i = 0; i < n; ++i) {
        if (!inst.s.contains(j, i)) CHECK(r.decomposition.components[j][i] == 0.0);
        sum[i] += r.decomposition.components[j][i];
      }
    }
    for (int i = 0; i < n; ++i) CHECK(sum[i] == doctest::Approx(r.approximation[i]).epsilon(1e-12));

    // Monotone descent of the recorded objective trace.
    for (std::size_t s = 1; s < r.trace.size(); ++s) CHECK(r.trace[s] <= r.trace[s - 1] + 1e-10);

    // Per-block subgradient optimality at the limit point.
    for (int j = 0; j < m; ++j) {
      const auto& idx = inst.s.groups[j];
      std::vector<double> resid(idx.size());
      double rnorm = 0.0, vnorm = 0.0;
      for (std::size_t s = 0; s < idx.size(); ++s) {
        int i = idx[s];
        resid[s] = x[i] - r.approximation[i] + r.decomposition.components[j][i];
        vnorm += r.decomposition.components[j][i] * r.decomposition.components[j][i];
      }
      for (double v : resid) rnorm += v * v;
      rnorm = std::sqrt(rnorm);
      vnorm = std::sqrt(vnorm);
      if (vnorm <= 1e-12) {
        CHECK(rnorm <= lambda * d[j] + 1e-8);
      } else {
        // resid - v = lambda d v / ||v||
        for (std::size_t s = 0; s < idx.size(); ++s) {
          int i = idx[s];
          double expect = lambda * d[j] * r.decomposition.components[j][i] / vnorm;
          CHECK(resid[s] - r.decomposition.components[j][i] ==
                doctest::Approx(expect).epsilon(1e-7));
        }
      }
    }

    // Halved tolerance changes the terminal objective by less than 1e-8.
    LassoOptions tight;
    tight.tol = 0.5e-8;
    ConvexResult r2 = latent_group_lasso(inst.s, x, lambda, d, tight);
    CHECK(std::fabs(r2.final_objective - r.final_objective) <= 1e-8);
  }
}

TEST_CASE("hierarchical prox basics") {
  TreeModel chain = TreeModel::from_parents({-1, 0, 1}, {});
  std::vector<double> x{0, 5, 0};

  ConvexResult id = hierarchical_group_lasso(chain, x, 0.0);
  CHECK(id.approximation == x);

  // lambda >= ||x|| kills everything through the root group.
  ConvexResult dead = hierarchical_group_lasso(chain, x, 5.0);
  for (double v : dead.approximation) CHECK(std::fabs(v) <= 1e-12);

  ConvexResult mid = hierarchical_group_lasso(chain, x, 1.0);
  CHECK(std::fabs(mid.approximation[1]) > 1e-9);
  CHECK(mid.approximation[2] == 0.0);
  CHECK(count_hierarchy_violations(chain, support(mid.approximation)) == 0);
}

TEST_CASE("hierarchical prox matches the ADMM oracle") {
  std::mt19937_64 rng(11);
  int pairs = 0;
  while (pairs < 50) {
    int n = 2 + static_cast<int>(rng() % 5);  // trees up to 6 nodes
    TreeModel tree = ts::random_tree(rng, n);
    std::vector<double> x(n);
    for (double& v : x) v = static_cast<double>(static_cast<int>(rng() % 1200)) / 100.0 - 6.0;
    double lambda = 0.1 + static_cast<double>(rng() % 200) / 100.0;

    ConvexResult r = hierarchical_group_lasso(tree, x, lambda);
    std::vector<double> oracle = admm_prox_oracle(tree, x, lambda, 3000);
    double mine = hier_objective(tree, x, r.approximation, lambda);
    double theirs = hier_objective(tree, x, oracle, lambda);
    CHECK(mine <= theirs + 1e-6);
    CHECK(std::fabs(mine - theirs) <= 1e-6);
    ++pairs;
  }
}

TEST_CASE("hierarchical prox support is rooted-connected") {
  std::mt19937_64 rng(13);
  for (int t = 0; t < 30; ++t) {
    int n = 2 + static_cast<int>(rng() % 14);
    TreeModel tree = ts::random_tree(rng, n);
    std::vector<double> x(n);
    for (double& v : x) v = static_cast<double>(static_cast<int>(rng() % 1000)) / 100.0 - 5.0;
    double lambda = static_cast<double>(rng() % 300) / 100.0 + 0.01;
    ConvexResult r = hierarchical_group_lasso(tree, x, lambda);
    CHECK(count_hierarchy_violations(tree, support(r.approximation)) == 0);
  }
}

TEST_CASE("refit and violation counting") {
  std::vector<double> x{3, -1, 2};
  CHECK(refit_support(x, {}) == std::vector<double>{0, 0, 0});
  CHECK(refit_support(x, {0, 1, 2}) == x);
  CHECK(refit_support(x, {0, 2}) == std::vector<double>{3, 0, 2});
  CHECK_THROWS_AS(refit_support(x, {5}), Error);

  // Depth-3 chain: a bare leaf has one missing parent.
  TreeModel chain = TreeModel::from_parents({-1, 0, 1}, {});
  CHECK(count_hierarchy_violations(chain, {0, 1, 2}) == 0);
  CHECK(count_hierarchy_violations(chain, {2}) == 1);

  // Two leaves on disjoint branches with no root: two violations.
  TreeModel star = TreeModel::from_parents({-1, 0, 0}, {});
  CHECK(count_hierarchy_violations(star, {1, 2}) == 2);
  CHECK(count_hierarchy_violations(star, {0}) == 0);
}
