// Dense bounded-variable primal simplex for the TU relaxations. Sizes here
// are small (N+M columns, N rows), so the basis inverse is kept explicitly
// and updated by row elimination; Bland's rule guards against cycling in the
// heavily degenerate all-zero-rhs start.
#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "groupsel/errors.hpp"
#include "groupsel/relax.hpp"
#include "groupsel/simd_kernels.hpp"

namespace groupsel {

std::vector<std::vector<double>> BinaryLP::constraint_matrix() const {
  std::vector<std::vector<double>> c(n, std::vector<double>(num_vars(), 0.0));
  for (int i = 0; i < n; ++i) {
    c[i][i] = 1.0;
    for (int j : covering[i]) c[i][n + j] = -1.0;
  }
  return c;
}

BinaryLP standard_form(const GroupStructure& s, const std::vector<double>& w, double lambda_g,
                       std::optional<double> lambda_k) {
  if (static_cast<int>(w.size()) != s.ground_size)
    fail(Errc::dimension_mismatch, "weight vector length does not match ground size");
  if (lambda_g <= 0.0) fail(Errc::budget_out_of_range, "lambda_g must be positive");
  if (lambda_k && *lambda_k < 0.0) fail(Errc::budget_out_of_range, "lambda_k must be non-negative");
  BinaryLP lp;
  lp.n = s.ground_size;
  lp.m = s.num_groups();
  lp.lambda_g = lambda_g;
  lp.lambda_k = lambda_k;
  lp.covering = s.memberships;
  lp.objective = w;
  lp.objective.resize(lp.n + lp.m, -lambda_g);
  if (lambda_k) lp.objective.resize(2 * lp.n + lp.m, -*lambda_k);
  return lp;
}

namespace {

constexpr double kRcTol = 1e-9;
constexpr double kPivTol = 1e-10;
constexpr double kInf = std::numeric_limits<double>::infinity();

enum class VStat : std::uint8_t { AtLower, AtUpper, Basic };

// max c'v  s.t.  y_i - sum_{j: i in G_j} omega_j + s_i = 0,
// y, omega in [0,1], s >= 0. Variables: y (0..n), omega (n..n+m), slack rest.
class BoundedSimplex {
public:
  BoundedSimplex(const BinaryLP& lp)
      : n_(lp.n), m_(lp.m), t_(lp.n + lp.m) {
    group_elems_.assign(m_, {});
    for (int i = 0; i < n_; ++i)
      for (int j : lp.covering[i]) group_elems_[j].push_back(i);
    ncols_ = t_ + n_;
    ub_.assign(ncols_, 1.0);
    for (int i = 0; i < n_; ++i) ub_[t_ + i] = kInf;
    vstat_.assign(ncols_, VStat::AtLower);
    basis_.resize(n_);
    binv_.assign(n_, std::vector<double>(n_, 0.0));
    xb_.assign(n_, 0.0);
    for (int i = 0; i < n_; ++i) {
      basis_[i] = t_ + i;
      vstat_[t_ + i] = VStat::Basic;
      binv_[i][i] = 1.0;
    }
  }

  void optimize(const std::vector<double>& c, const std::vector<std::uint8_t>& frozen) {
    const int max_iters = 20000 + 200 * ncols_;
    for (int iter = 0;; ++iter) {
      if (iter > max_iters)
        fail(Errc::numerical_failure, "simplex iteration limit exceeded");

      // Duals and entering candidate (Bland: lowest index).
      std::vector<double> dual(n_, 0.0);
      for (int r = 0; r < n_; ++r) {
        double cb = c[basis_[r]];
        if (cb != 0.0) kern::axpy(cb, binv_[r].data(), dual.data(), n_);
      }
      int enter = -1, dir = 0;
      for (int v = 0; v < ncols_; ++v) {
        if (vstat_[v] == VStat::Basic || (!frozen.empty() && frozen[v])) continue;
        double rc = c[v] - dual_dot_col(dual, v);
        if (vstat_[v] == VStat::AtLower && rc > kRcTol) {
          enter = v;
          dir = 1;
          break;
        }
        if (vstat_[v] == VStat::AtUpper && rc < -kRcTol) {
          enter = v;
          dir = -1;
          break;
        }
      }
      if (enter < 0) return;

      std::vector<double> d = ftran(enter);

      // Ratio test: how far can the entering variable move?
      double t_limit = ub_[enter] < kInf ? ub_[enter] : kInf;  // bound flip distance
      int leave_row = -1;
      double t_basic = kInf;
      for (int r = 0; r < n_; ++r) {
        double rate = dir * d[r];
        double cand = kInf;
        if (rate > kPivTol) {
          cand = xb_[r] / rate;  // basic falls to its lower bound 0
        } else if (rate < -kPivTol && ub_[basis_[r]] < kInf) {
          cand = (ub_[basis_[r]] - xb_[r]) / (-rate);
        }
        if (cand < t_basic - 1e-12 ||
            (cand < t_basic + 1e-12 && leave_row >= 0 && basis_[r] < basis_[leave_row])) {
          t_basic = cand;
          leave_row = r;
        }
      }

      if (t_limit <= t_basic && t_limit < kInf) {
        // Bound flip, no basis change.
        for (int r = 0; r < n_; ++r) xb_[r] -= dir * t_limit * d[r];
        vstat_[enter] = (dir > 0) ? VStat::AtUpper : VStat::AtLower;
        continue;
      }
      if (leave_row < 0)
        fail(Errc::numerical_failure, "simplex detected an unbounded direction");

      double t = std::max(t_basic, 0.0);
      int leave_var = basis_[leave_row];
      double rate = dir * d[leave_row];
      vstat_[leave_var] = (rate > 0.0) ? VStat::AtLower : VStat::AtUpper;

      for (int r = 0; r < n_; ++r) xb_[r] -= dir * t * d[r];
      xb_[leave_row] = bound_value(enter) + dir * t;

      double piv = d[leave_row];
      if (std::fabs(piv) < kPivTol)
        fail(Errc::numerical_failure, "simplex pivot too small");
      kern::scale(1.0 / piv, binv_[leave_row].data(), n_);
      for (int r = 0; r < n_; ++r) {
        if (r == leave_row || d[r] == 0.0) continue;
        kern::axpy(-d[r], binv_[leave_row].data(), binv_[r].data(), n_);
      }
      basis_[leave_row] = enter;
      vstat_[enter] = VStat::Basic;
    }
  }

  std::vector<double> structural_values() const {
    std::vector<double> v(t_, 0.0);
    for (int j = 0; j < t_; ++j)
      if (vstat_[j] == VStat::AtUpper) v[j] = 1.0;
    for (int r = 0; r < n_; ++r)
      if (basis_[r] < t_) v[basis_[r]] = xb_[r];
    return v;
  }

  // Nonbasic variables whose reduced cost is nonzero must stay at their
  // bounds in every optimum; freezing them restricts to the optimal face.
  std::vector<std::uint8_t> tight_nonbasics(const std::vector<double>& c) const {
    std::vector<double> dual(n_, 0.0);
    for (int r = 0; r < n_; ++r) {
      double cb = c[basis_[r]];
      if (cb != 0.0) kern::axpy(cb, binv_[r].data(), dual.data(), n_);
    }
    std::vector<std::uint8_t> frozen(ncols_, 0);
    for (int v = 0; v < ncols_; ++v) {
      if (vstat_[v] == VStat::Basic) continue;
      double rc = c[v] - dual_dot_col(dual, v);
      if (std::fabs(rc) > kRcTol) frozen[v] = 1;
    }
    return frozen;
  }

  int num_cols() const { return ncols_; }
  int num_structural() const { return t_; }

private:
  double bound_value(int v) const { return vstat_[v] == VStat::AtUpper ? ub_[v] : 0.0; }

  // Sparse column of the constraint matrix: y_i -> e_i; omega_j -> -1 on the
  // rows of its elements; slack i -> e_i.
  template <typename F>
  void for_col(int v, F&& f) const {
    if (v < n_) {
      f(v, 1.0);
    } else if (v < t_) {
      for (int i : group_elems_[v - n_]) f(i, -1.0);
    } else {
      f(v - t_, 1.0);
    }
  }

  double dual_dot_col(const std::vector<double>& dual, int v) const {
    double acc = 0.0;
    for_col(v, [&](int row, double coef) { acc += dual[row] * coef; });
    return acc;
  }

  std::vector<double> ftran(int v) const {
    std::vector<double> d(n_, 0.0);
    for_col(v, [&](int row, double coef) {
      for (int r = 0; r < n_; ++r) d[r] += coef * binv_[r][row];
    });
    return d;
  }

  int n_, m_, t_, ncols_;
  std::vector<std::vector<int>> group_elems_;
  std::vector<double> ub_;
  std::vector<VStat> vstat_;
  std::vector<int> basis_;
  std::vector<std::vector<double>> binv_;
  std::vector<double> xb_;
};

// Reduced objective over (y, omega): the repeated y block of Eq-form data
// folds its penalty into the y coefficients.
std::vector<double> reduced_objective(const BinaryLP& lp) {
  std::vector<double> c(lp.n + lp.m);
  for (int i = 0; i < lp.n; ++i)
    c[i] = lp.objective[i] - (lp.lambda_k ? *lp.lambda_k : 0.0);
  for (int j = 0; j < lp.m; ++j) c[lp.n + j] = -lp.lambda_g;
  return c;
}

LpSolution finish(const BinaryLP& lp, const BoundedSimplex& simplex,
                  const std::vector<double>& c) {
  LpSolution sol;
  std::vector<double> v = simplex.structural_values();
  sol.value = kern::dot(c.data(), v.data(), v.size());
  sol.integral = true;
  for (double x : v)
    if (std::fabs(x - std::round(x)) > 1e-9) sol.integral = false;
  sol.u = v;
  if (lp.lambda_k) {
    sol.u.resize(2 * lp.n + lp.m);
    for (int i = 0; i < lp.n; ++i) sol.u[lp.n + lp.m + i] = v[i];
  }
  return sol;
}

}  // namespace

LpSolution solve_tu_lp(const BinaryLP& lp) {
  std::vector<double> c(lp.n + lp.m + lp.n, 0.0);
  std::vector<double> red = reduced_objective(lp);
  std::copy(red.begin(), red.end(), c.begin());
  BoundedSimplex simplex(lp);
  simplex.optimize(c, {});
  return finish(lp, simplex, c);
}

LpSolution solve_tu_lp_max_groups(const BinaryLP& lp) {
  std::vector<double> c(lp.n + lp.m + lp.n, 0.0);
  std::vector<double> red = reduced_objective(lp);
  std::copy(red.begin(), red.end(), c.begin());
  BoundedSimplex simplex(lp);
  simplex.optimize(c, {});

  std::vector<std::uint8_t> frozen = simplex.tight_nonbasics(c);
  std::vector<double> c2(simplex.num_cols(), 0.0);
  for (int j = 0; j < lp.m; ++j) c2[lp.n + j] = 1.0;
  c2.resize(lp.n + lp.m + lp.n, 0.0);
  simplex.optimize(c2, frozen);
  return finish(lp, simplex, c);
}

}  // namespace groupsel
