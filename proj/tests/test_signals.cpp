#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "groupsel/errors.hpp"
#include "groupsel/exact.hpp"
#include "groupsel/signals.hpp"
#include "test_support.hpp"

using namespace groupsel;

TEST_CASE("indicator is exact") {
  CHECK(indicator({0, 0, 0}) == std::vector<std::uint8_t>{0, 0, 0});
  CHECK(indicator({0, -2, 0.5}) == std::vector<std::uint8_t>{0, 1, 1});
  CHECK(indicator({1e-300, 0, 1}) == std::vector<std::uint8_t>{1, 0, 1});
}

TEST_CASE("approximation from a cover") {
  GroupStructure vi = ts::case_study_structure();
  std::vector<double> x = ts::case_study_signal();
  std::vector<double> w = squared_weights(x);

  Selection best = solve_wmc_dp(vi, w, 2);
  std::vector<double> xhat = approximate_from_cover(x, best);
  CHECK(xhat == x);  // the signal is 2-group sparse

  Selection none;
  none.groups.assign(3, 0);
  none.elements.assign(11, 0);
  std::vector<double> zero = approximate_from_cover(x, none);
  for (double v : zero) CHECK(v == 0.0);

  CHECK_THROWS_AS(approximate_from_cover(std::vector<double>(4, 1.0), best), Error);
}

TEST_CASE("problem equivalence ties error to objective") {
  std::mt19937_64 rng(19);
  for (int t = 0; t < 20; ++t) {
    auto inst = ts::random_loopless(rng, 8, 24, false);
    const int n = inst.s.ground_size;
    std::vector<double> x(n);
    for (double& v : x) v = static_cast<double>(static_cast<int>(rng() % 9)) - 4.0;
    std::vector<double> w = squared_weights(x);
    int g = 1 + static_cast<int>(rng() % inst.s.num_groups());
    int k = 1 + static_cast<int>(rng() % n);
    Selection sel = solve_gwmc_dp(inst.s, w, g, k);
    std::vector<double> xhat = approximate_from_cover(x, sel);
    double err = 0.0, energy = 0.0;
    for (int i = 0; i < n; ++i) {
      err += (x[i] - xhat[i]) * (x[i] - xhat[i]);
      energy += x[i] * x[i];
    }
    CHECK(err + sel.objective == doctest::Approx(energy).epsilon(1e-12));
  }
}

TEST_CASE("haar transform basics") {
  // Constants map to a single scaling coefficient.
  HaarCoefficients c = haar_forward(std::vector<double>(16, 3.0));
  CHECK(c.values[0] == doctest::Approx(12.0));  // 3 * sqrt(16)
  for (int i = 1; i < 16; ++i) CHECK(c.values[i] == doctest::Approx(0.0));
  CHECK(c.depth == 4);

  // Step signal: only the scaling slot and the coarsest detail remain.
  HaarCoefficients step = haar_forward({1, 1, -1, -1});
  CHECK(step.values[0] == doctest::Approx(0.0));
  CHECK(step.values[1] == doctest::Approx(2.0));
  CHECK(step.values[2] == doctest::Approx(0.0));
  CHECK(step.values[3] == doctest::Approx(0.0));

  CHECK_THROWS_AS(haar_forward(std::vector<double>(6, 1.0)), Error);
}

TEST_CASE("haar roundtrip and energy conservation") {
  std::mt19937_64 rng(23);
  for (int n : {2, 8, 64}) {
    std::vector<double> x(n);
    for (double& v : x) v = static_cast<double>(static_cast<int>(rng() % 2000)) / 100.0 - 10.0;
    HaarCoefficients c = haar_forward(x);
    double ex = 0.0, ec = 0.0;
    for (double v : x) ex += v * v;
    for (double v : c.values) ec += v * v;
    CHECK(std::sqrt(ec) == doctest::Approx(std::sqrt(ex)).epsilon(1e-10));
    std::vector<double> back = haar_inverse(c);
    for (int i = 0; i < n; ++i) CHECK(back[i] == doctest::Approx(x[i]).epsilon(1e-10));
  }
}

TEST_CASE("haar tree links coefficients to dyadic parents") {
  TreeModel t = haar_tree(8);
  CHECK(t.root == 0);
  CHECK(t.parent[1] == 0);
  CHECK(t.parent[2] == 1);
  CHECK(t.parent[3] == 1);
  CHECK(t.parent[4] == 2);
  CHECK(t.parent[7] == 3);
  CHECK(t.max_children == 2);
}

TEST_CASE("piecewise constant generator") {
  std::vector<double> flat = gen_piecewise_constant(8, 1, 3);
  for (double v : flat) CHECK(v == flat[0]);

  std::vector<double> two = gen_piecewise_constant(8, 2, 5);
  int changes = 0;
  for (int i = 1; i < 8; ++i)
    if (two[i] != two[i - 1]) ++changes;
  CHECK(changes == 1);
  int sparsity = 0;
  for (double v : haar_forward(two).values)
    if (v != 0.0) ++sparsity;
  CHECK(sparsity <= 4);  // 1 + log2(8)

  // Determinism and the general sparsity bound.
  std::mt19937_64 rng(29);
  for (int t = 0; t < 15; ++t) {
    int n = 1 << (3 + static_cast<int>(rng() % 4));
    int pieces = 1 + static_cast<int>(rng() % 6);
    std::uint64_t seed = rng();
    std::vector<double> a = gen_piecewise_constant(n, pieces, seed);
    std::vector<double> b = gen_piecewise_constant(n, pieces, seed);
    CHECK(a == b);
    int segs = 1;
    for (int i = 1; i < n; ++i)
      if (a[i] != a[i - 1]) ++segs;
    CHECK(segs == pieces);
    int sp = 0;
    for (double v : haar_forward(a).values)
      if (std::fabs(v) > 1e-12) ++sp;
    CHECK(sp <= 1 + (pieces - 1) * static_cast<int>(std::log2(n)));
  }
}

TEST_CASE("hierarchy groups from trees") {
  TreeModel small = TreeModel::from_parents({-1, 0, 0}, {});
  GroupStructure hs = hierarchy_groups(small);
  REQUIRE(hs.num_groups() == 3);
  CHECK(hs.groups[0] == std::vector<int>{0});
  CHECK(hs.groups[1] == std::vector<int>{0, 1});
  CHECK(hs.groups[2] == std::vector<int>{0, 2});

  TreeModel chain = TreeModel::from_parents({-1, 0, 1}, {});
  GroupStructure cs = hierarchy_groups(chain);
  CHECK(cs.groups[2] == std::vector<int>{0, 1, 2});

  // Complete binary tree of depth 5: 63 groups, largest of size 6.
  std::vector<int> parent(63, -1);
  for (int v = 1; v < 63; ++v) parent[v] = (v - 1) / 2;
  GroupStructure big = hierarchy_groups(TreeModel::from_parents(std::move(parent), {}));
  CHECK(big.num_groups() == 63);
  std::size_t largest = 0;
  for (const auto& g : big.groups) largest = std::max(largest, g.size());
  CHECK(largest == 6);
}

TEST_CASE("hierarchy groups always classify hierarchical") {
  std::mt19937_64 rng(31);
  for (int t = 0; t < 25; ++t) {
    int n = 1 + static_cast<int>(rng() % 14);
    TreeModel tree = ts::random_tree(rng, n);
    GroupStructure s = hierarchy_groups(tree);
    StructureClass c = classify(s);
    CHECK(c.tag == StructureTag::Hierarchical);
    REQUIRE(c.hierarchy.has_value());
    // The reconstruction recovers the same parent links.
    for (int v = 0; v < n; ++v) CHECK(c.hierarchy->parent[v] == tree.parent[v]);
  }
}

TEST_CASE("parent-child groups") {
  TreeModel chain = TreeModel::from_parents({-1, 0, 1}, {});
  GroupStructure pc = parent_child_groups(chain);
  REQUIRE(pc.num_groups() == 3);
  CHECK(pc.groups[0] == std::vector<int>{0});
  CHECK(pc.groups[1] == std::vector<int>{0, 1});
  CHECK(pc.groups[2] == std::vector<int>{1, 2});

  TreeModel one = TreeModel::from_parents({-1}, {});
  CHECK(parent_child_groups(one).num_groups() == 1);

  TreeModel fork = TreeModel::from_parents({-1, 0, 0}, {});
  GroupStructure f = parent_child_groups(fork);
  REQUIRE(f.num_groups() == 3);
  CHECK(f.groups[1] == std::vector<int>{0, 1});
  CHECK(f.groups[2] == std::vector<int>{0, 2});
}
