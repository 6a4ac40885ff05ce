#include "groupsel/convex.hpp"

#include <algorithm>
#include <cmath>

#include "groupsel/errors.hpp"
#include "groupsel/simd_kernels.hpp"

namespace groupsel {

namespace {

double group_norm(const std::vector<double>& v, const std::vector<int>& idx) {
  double acc = 0.0;
  for (int i : idx) acc += v[i] * v[i];
  return std::sqrt(acc);
}

}  // namespace

ConvexResult latent_group_lasso(const GroupStructure& s, const std::vector<double>& x,
                                double lambda, const std::vector<double>& d, LassoOptions opts) {
  const int n = s.ground_size;
  const int m = s.num_groups();
  if (static_cast<int>(x.size()) != n)
    fail(Errc::dimension_mismatch, "signal length does not match ground size");
  if (static_cast<int>(d.size()) != m)
    fail(Errc::dimension_mismatch, "one weight per group required");
  if (lambda <= 0.0) fail(Errc::budget_out_of_range, "lambda must be positive");
  for (double v : d)
    if (v <= 0.0) fail(Errc::budget_out_of_range, "group weights must be positive");

  ConvexResult res;
  res.decomposition.components.assign(m, std::vector<double>(n, 0.0));
  res.decomposition.group_weights = d;
  res.decomposition.lambda = lambda;

  std::vector<double> total(n, 0.0);  // sum of components
  auto objective = [&]() {
    std::vector<double> r(n);
    kern::sub(x.data(), total.data(), r.data(), n);
    double obj = 0.5 * kern::sum_squares(r.data(), n);
    for (int j = 0; j < m; ++j) obj += lambda * d[j] * group_norm(res.decomposition.components[j], s.groups[j]);
    return obj;
  };

  int sweep = 0;
  for (; sweep < opts.max_sweeps; ++sweep) {
    double max_change = 0.0;
    for (int j = 0; j < m; ++j) {
      auto& vj = res.decomposition.components[j];
      const auto& idx = s.groups[j];
      // Block residual on the group coordinates, with this block removed.
      double norm2 = 0.0;
      std::vector<double> r(idx.size());
      for (std::size_t t = 0; t < idx.size(); ++t) {
        int i = idx[t];
        r[t] = x[i] - total[i] + vj[i];
        norm2 += r[t] * r[t];
      }
      double norm = std::sqrt(norm2);
      double shrink = lambda * d[j];
      double factor = norm > shrink ? (1.0 - shrink / norm) : 0.0;
      double change2 = 0.0;
      for (std::size_t t = 0; t < idx.size(); ++t) {
        int i = idx[t];
        double nv = factor * r[t];
        double delta = nv - vj[i];
        change2 += delta * delta;
        total[i] += delta;
        vj[i] = nv;
      }
      max_change = std::max(max_change, std::sqrt(change2));
    }
    res.trace.push_back(objective());
    if (max_change < opts.tol) {
      ++sweep;
      break;
    }
    if (sweep + 1 == opts.max_sweeps)
      fail(Errc::non_convergence, "latent group lasso hit the sweep cap");
  }

  res.iterations = sweep;
  res.approximation = total;
  res.final_objective = res.trace.empty() ? 0.0 : res.trace.back();
  for (int j = 0; j < m; ++j)
    if (group_norm(res.decomposition.components[j], s.groups[j]) > opts.support_eps)
      res.strong_support.push_back(j);
  return res;
}

ConvexResult hierarchical_group_lasso(const TreeModel& t, const std::vector<double>& x,
                                      double lambda) {
  const int n = t.size();
  if (static_cast<int>(x.size()) != n)
    fail(Errc::dimension_mismatch, "signal length does not match node count");
  if (lambda < 0.0) fail(Errc::budget_out_of_range, "lambda must be non-negative");

  ConvexResult res;
  std::vector<double> z = x;

  // Children before parents: groups ordered by decreasing node depth.
  std::vector<int> order(n);
  for (int v = 0; v < n; ++v) order[v] = v;
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return t.depth(a) > t.depth(b); });
  std::vector<std::vector<int>> subtree(n);
  for (int v : order) subtree[v] = t.subtree(v);

  for (int v : order) {
    double norm = group_norm(z, subtree[v]);
    double factor = norm > lambda ? (1.0 - lambda / norm) : 0.0;
    for (int i : subtree[v]) z[i] *= factor;
  }

  res.approximation = z;
  res.iterations = 1;
  // Positional decomposition: coordinate i belongs to the group rooted at i.
  res.decomposition.components.assign(n, std::vector<double>(n, 0.0));
  res.decomposition.group_weights.assign(n, 1.0);
  res.decomposition.lambda = lambda;
  for (int i = 0; i < n; ++i) res.decomposition.components[i][i] = z[i];
  // Support as a node set of the rooted-connected family: the ancestor
  // closure of the nonzeros (coordinates that are exactly zero in x stay
  // zero in z but still sit on the path to the root).
  std::vector<std::uint8_t> in_support(n, 0);
  for (int i = 0; i < n; ++i)
    if (std::fabs(z[i]) > 1e-6)
      for (int u = i;; u = t.parent[u]) {
        if (in_support[u]) break;
        in_support[u] = 1;
        if (u == t.root) break;
      }
  for (int i = 0; i < n; ++i)
    if (in_support[i]) res.strong_support.push_back(i);

  double obj = 0.0;
  {
    std::vector<double> r(n);
    kern::sub(x.data(), z.data(), r.data(), n);
    obj = 0.5 * kern::sum_squares(r.data(), n);
    for (int v = 0; v < n; ++v) obj += lambda * group_norm(z, subtree[v]);
  }
  res.final_objective = obj;
  res.trace.push_back(obj);
  return res;
}

std::vector<double> refit_support(const std::vector<double>& x, const std::vector<int>& support) {
  std::vector<double> out(x.size(), 0.0);
  for (int i : support) {
    if (i < 0 || i >= static_cast<int>(x.size()))
      fail(Errc::index_out_of_range, "support index out of range");
    out[i] = x[i];
  }
  return out;
}

int count_hierarchy_violations(const TreeModel& t, const std::vector<int>& support) {
  std::vector<std::uint8_t> in(t.size(), 0);
  for (int v : support) {
    if (v < 0 || v >= t.size()) fail(Errc::index_out_of_range, "support node out of range");
    in[v] = 1;
  }
  int violations = 0;
  for (int v : support)
    if (v != t.root && !in[t.parent[v]]) ++violations;
  return violations;
}

}  // namespace groupsel
