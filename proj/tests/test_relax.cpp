#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <bit>
#include <cmath>
#include <random>
#include <set>

#include "groupsel/errors.hpp"
#include "groupsel/relax.hpp"
#include "groupsel/signals.hpp"
#include "test_support.hpp"

using namespace groupsel;

namespace {

// Independent enumeration of the regularized binary program.
double brute_penalized_max(const GroupStructure& s, const std::vector<double>& w, double lambda) {
  const int m = s.num_groups();
  double best = 0.0;
  for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
    std::vector<std::uint8_t> covered(s.ground_size, 0);
    for (int j = 0; j < m; ++j)
      if (mask & (1u << j))
        for (int i : s.groups[j]) covered[i] = 1;
    double value = -lambda * std::popcount(mask);
    for (int i = 0; i < s.ground_size; ++i)
      if (covered[i] && w[i] > 0.0) value += w[i];
    best = std::max(best, value);
  }
  return best;
}

}  // namespace

TEST_CASE("standard form blocks") {
  GroupStructure vi = ts::case_study_structure();
  std::vector<double> w = squared_weights(ts::case_study_signal());
  BinaryLP lp = standard_form(vi, w, 1.0);
  std::vector<double> expect{0, 0, 1, 1, 1, 0, 1, 1, 1, 0, 0, -1, -1, -1};
  CHECK(lp.objective == expect);
  auto c = lp.constraint_matrix();
  REQUIRE(c.size() == 11);
  REQUIRE(c[0].size() == 14);
  CHECK(c[0][0] == 1.0);
  CHECK(c[0][11] == -1.0);   // element 1 is covered by G1
  CHECK(c[6][12] == -1.0);   // element 7 by G2
  CHECK(c[6][13] == -1.0);   // and G3
  CHECK(c[6][11] == 0.0);

  // lambda_k = 0 changes nothing but the layout.
  BinaryLP lp0 = standard_form(vi, w, 1.0, 0.0);
  CHECK(lp0.num_vars() == 25);
  CHECK(solve_tu_lp(lp0).value == doctest::Approx(solve_tu_lp(lp).value));

  // Tiny instance solved by inspection.
  GroupStructure tiny = structure_from_one_based(1, {{1}});
  BinaryLP tlp = standard_form(tiny, {1.0}, 0.5);
  LpSolution sol = solve_tu_lp(tlp);
  CHECK(sol.integral);
  CHECK(sol.u[0] == doctest::Approx(1.0));
  CHECK(sol.u[1] == doctest::Approx(1.0));
  CHECK(sol.value == doctest::Approx(0.5));
}

TEST_CASE("tu lp on the case study") {
  GroupStructure vi = ts::case_study_structure();
  std::vector<double> w = squared_weights(ts::case_study_signal());

  LpSolution sol = solve_tu_lp(standard_form(vi, w, 1.0));
  REQUIRE(sol.integral);
  CHECK(std::lround(sol.u[11]) == 1);
  CHECK(std::lround(sol.u[12]) == 0);
  CHECK(std::lround(sol.u[13]) == 1);
  for (int i = 0; i < 11; ++i)
    if (w[i] > 0) CHECK(std::lround(sol.u[i]) == 1);

  // A lambda above the total weight zeroes everything.
  LpSolution zero = solve_tu_lp(standard_form(vi, w, 7.0));
  CHECK(zero.integral);
  CHECK(zero.value == doctest::Approx(0.0));
  for (double v : zero.u) CHECK(std::fabs(v) <= 1e-9);
}

TEST_CASE("solve_regularized matches the case study") {
  GroupStructure vi = ts::case_study_structure();
  std::vector<double> w = squared_weights(ts::case_study_signal());

  for (double lambda : {0.5, 1.0, 1.5, 2.0}) {
    Selection sel = solve_regularized(vi, w, lambda);
    CHECK(sel.group_indices() == std::vector<int>{0, 2});
    CHECK(sel.objective == doctest::Approx(6));
  }
  // lambda = 1: penalized value 6 - 2 = 4.
  Selection one = solve_regularized(vi, w, 1.0);
  CHECK(one.objective - 1.0 * one.num_groups() == doctest::Approx(4));

  // Penalty dominating the second group's gain of 3 picks fewer groups.
  Selection three = solve_regularized(vi, w, 3.0);
  CHECK(three.num_groups() < 2);

  Selection inf = solve_regularized(vi, w, 1e9);
  CHECK(inf.num_groups() == 0);
  CHECK(inf.objective == doctest::Approx(0));

  CHECK_THROWS_AS(solve_regularized(vi, w, 0.0), Error);
}

TEST_CASE("tu integrality and agreement with enumeration") {
  std::mt19937_64 rng(5);
  int checked = 0;
  for (int t = 0; t < 12; ++t) {
    GroupStructure s = [&]() {
      if (t % 2 == 0) return ts::random_loopless(rng, 8, 24, false).s;
      TreeModel tree = ts::random_tree(rng, 3 + static_cast<int>(rng() % 8));
      return hierarchy_groups(tree);
    }();
    if (tu_certificate(s) == TuCertificate::Unknown) continue;
    std::vector<double> w(s.ground_size);
    for (double& v : w) v = static_cast<double>(rng() % 1000) / 100.0;
    double total = 0.0;
    for (double v : w) total += v;
    for (int gi = 1; gi <= 10; ++gi) {
      double lambda = total * gi / 12.0 + 1e-3;
      LpSolution sol = solve_tu_lp(standard_form(s, w, lambda));
      CHECK(sol.integral);
      for (double v : sol.u) CHECK(std::fabs(v - std::round(v)) <= 1e-9);
      if (s.num_groups() <= 16)
        CHECK(sol.value == doctest::Approx(brute_penalized_max(s, w, lambda)).epsilon(1e-9));
      ++checked;
    }
  }
  CHECK(checked > 50);
}

TEST_CASE("degenerate lambda ties resolve to more groups") {
  GroupStructure vi = ts::case_study_structure();
  std::vector<double> w = squared_weights(ts::case_study_signal());
  // At lambda = 2 both {G2} and {G1,G3} are optimal with value 2; the larger
  // group count wins on both solver paths.
  Selection sel = solve_regularized(vi, w, 2.0);
  CHECK(sel.num_groups() == 2);
  CHECK(sel.group_indices() == std::vector<int>{0, 2});
}

TEST_CASE("pareto frontier of the case study") {
  GroupStructure vi = ts::case_study_structure();
  std::vector<double> w = squared_weights(ts::case_study_signal());
  ParetoFrontier f = pareto_frontier(vi, w, WmcSolver::Dp);
  REQUIRE(f.points.size() == 3);
  CHECK(f.points[0].value == doctest::Approx(4));
  CHECK(f.points[1].value == doctest::Approx(6));
  CHECK(f.points[2].value == doctest::Approx(6));
  for (const auto& p : f.points) CHECK(p.on_hull);
  // The flat step at G=3 has no positive attaining lambda.
  CHECK(f.points[0].lambda.has_value());
  CHECK(f.points[1].lambda.has_value());
  CHECK_FALSE(f.points[2].lambda.has_value());

  ParetoFrontier fo = pareto_frontier(vi, w, WmcSolver::Oracle);
  for (int g = 0; g < 3; ++g)
    CHECK(fo.points[g].value == doctest::Approx(f.points[g].value));
}

TEST_CASE("modular frontier is concave and fully attained") {
  GroupStructure s = structure_from_one_based(3, {{1}, {2}, {3}});
  std::vector<double> w{5, 3, 2};
  ParetoFrontier f = pareto_frontier(s, w, WmcSolver::Dp);
  CHECK(f.points[0].value == doctest::Approx(5));
  CHECK(f.points[1].value == doctest::Approx(8));
  CHECK(f.points[2].value == doctest::Approx(10));
  for (const auto& p : f.points) {
    CHECK(p.on_hull);
    CHECK(p.lambda.has_value());
  }

  // Sweeping the hull grid attains exactly the three budgets.
  auto sweep = lambda_sweep(s, w, hull_lambda_grid(f));
  std::set<int> attained;
  for (const auto& [lambda, sel] : sweep) attained.insert(sel.num_groups());
  CHECK(attained == std::set<int>{1, 2, 3});
}

TEST_CASE("non-concave frontier: the off-hull point is unattainable") {
  GroupStructure s = ts::nonconcave_structure();
  std::vector<double> w = ts::nonconcave_weights();
  ParetoFrontier f = pareto_frontier(s, w, WmcSolver::Oracle);
  REQUIRE(f.points.size() == 4);
  CHECK(f.points[0].value == doctest::Approx(10.5));
  CHECK(f.points[1].value == doctest::Approx(11.5));
  CHECK(f.points[2].value == doctest::Approx(13.0));
  CHECK(f.points[3].value == doctest::Approx(13.5));
  CHECK(f.points[0].on_hull);
  CHECK_FALSE(f.points[1].on_hull);
  CHECK(f.points[2].on_hull);
  CHECK(f.points[3].on_hull);

  auto sweep = lambda_sweep(s, w, hull_lambda_grid(f));
  std::set<int> attained;
  for (const auto& [lambda, sel] : sweep) {
    if (sel.num_groups() == 0) continue;
    attained.insert(sel.num_groups());
    // Lemma 3: a lambda solution with g groups achieves f(g) exactly.
    CHECK(sel.objective == doctest::Approx(f.points[sel.num_groups() - 1].value).epsilon(1e-12));
    CHECK(f.points[sel.num_groups() - 1].on_hull);
  }
  CHECK(attained == std::set<int>{1, 3, 4});
}

TEST_CASE("sweep results land on the frontier hull on random instances") {
  std::mt19937_64 rng(59);
  for (int t = 0; t < 8; ++t) {
    auto inst = ts::random_loopless(rng, 7, 20, false);
    ParetoFrontier f = pareto_frontier(inst.s, inst.w, WmcSolver::Dp);
    auto sweep = lambda_sweep(inst.s, inst.w, hull_lambda_grid(f));
    std::set<int> attained;
    for (const auto& [lambda, sel] : sweep) {
      int g = sel.num_groups();
      if (g == 0) continue;
      attained.insert(g);
      CHECK(sel.objective == doctest::Approx(f.points[g - 1].value).epsilon(1e-9));
      CHECK(f.points[g - 1].on_hull);
    }
    // Conversely, every point with an attaining lambda shows up in the sweep.
    for (const auto& p : f.points)
      if (p.lambda) CHECK(attained.count(p.budget) == 1);
  }
}

TEST_CASE("frontier is monotone and exhausts the weight") {
  std::mt19937_64 rng(61);
  auto inst = ts::random_loopless(rng, 8, 22, false);
  ParetoFrontier f = pareto_frontier(inst.s, inst.w, WmcSolver::Dp);
  double prev = 0.0, total = 0.0;
  for (double v : inst.w) total += v;
  for (const auto& p : f.points) {
    CHECK(p.value >= prev - 1e-12);
    prev = p.value;
  }
  CHECK(f.points.back().value == doctest::Approx(total));
}

TEST_CASE("tree frontier reuses the hull analysis") {
  TreeModel path = TreeModel::from_parents({-1, 0, 1}, {1, 0, 9});
  ParetoFrontier f = pareto_frontier_tree(path);
  REQUIRE(f.points.size() == 3);
  CHECK(f.points[0].value == doctest::Approx(1));
  CHECK(f.points[1].value == doctest::Approx(1));
  CHECK(f.points[2].value == doctest::Approx(10));
  CHECK_FALSE(f.points[1].on_hull);  // (2, 1) sits below the chord to (3, 10)
}
