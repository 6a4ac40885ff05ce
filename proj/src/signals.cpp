#include "groupsel/signals.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "groupsel/errors.hpp"
#include "groupsel/simd_kernels.hpp"

namespace groupsel {

std::vector<std::uint8_t> indicator(const std::vector<double>& x) {
  std::vector<std::uint8_t> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] != 0.0 ? 1 : 0;
  return out;
}

std::vector<int> support(const std::vector<double>& x) {
  std::vector<int> out;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] != 0.0) out.push_back(static_cast<int>(i));
  return out;
}

std::vector<double> approximate_from_cover(const std::vector<double>& x, const Selection& sel) {
  if (x.size() != sel.elements.size())
    fail(Errc::dimension_mismatch, "signal length does not match selection");
  std::vector<double> out(x.size(), 0.0);
  for (std::size_t i = 0; i < x.size(); ++i)
    if (sel.elements[i]) out[i] = x[i];
  return out;
}

namespace {

bool power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

constexpr double kInvSqrt2 = 0.70710678118654752440;

}  // namespace

TreeModel haar_tree(int n) {
  if (!power_of_two(n)) fail(Errc::not_power_of_two, "length must be a power of two");
  std::vector<int> parent(n);
  parent[0] = -1;
  if (n > 1) parent[1] = 0;
  for (int i = 2; i < n; ++i) parent[i] = i / 2;
  return TreeModel::from_parents(std::move(parent), {});
}

HaarCoefficients haar_forward(const std::vector<double>& x) {
  const int n = static_cast<int>(x.size());
  if (!power_of_two(n)) fail(Errc::not_power_of_two, "length must be a power of two");

  HaarCoefficients c;
  c.values.assign(n, 0.0);
  c.depth = 0;
  for (int len = n; len > 1; len >>= 1) ++c.depth;

  std::vector<double> work = x, avg(n / 2), diff(n / 2);
  for (int len = n; len > 1; len >>= 1) {
    const int pairs = len / 2;
    kern::haar_split(work.data(), pairs, kInvSqrt2, avg.data(), diff.data());
    std::copy(diff.begin(), diff.begin() + pairs, c.values.begin() + pairs);
    std::copy(avg.begin(), avg.begin() + pairs, work.begin());
  }
  c.values[0] = work[0];

  c.tree = haar_tree(n);
  c.tree.weights = squared_weights(c.values);
  return c;
}

std::vector<double> haar_inverse_values(const std::vector<double>& values) {
  const int n = static_cast<int>(values.size());
  if (!power_of_two(n)) fail(Errc::not_power_of_two, "length must be a power of two");
  std::vector<double> work(n), merged(n);
  work[0] = values[0];
  for (int len = 1; len < n; len <<= 1) {
    kern::haar_merge(work.data(), values.data() + len, len, kInvSqrt2, merged.data());
    std::copy(merged.begin(), merged.begin() + 2 * len, work.begin());
  }
  return work;
}

std::vector<double> haar_inverse(const HaarCoefficients& c) {
  return haar_inverse_values(c.values);
}

std::vector<double> gen_piecewise_constant(int n, int pieces, std::uint64_t seed) {
  if (!power_of_two(n)) fail(Errc::not_power_of_two, "length must be a power of two");
  if (pieces < 1 || pieces > n) fail(Errc::budget_out_of_range, "pieces must be in [1, n]");

  std::mt19937_64 rng(seed);
  auto draw = [&](std::uint64_t k) { return static_cast<int>(rng() % k); };

  // Partial Fisher-Yates over {1..n-1} for the breakpoints.
  std::vector<int> positions(n - 1);
  for (int i = 0; i < n - 1; ++i) positions[i] = i + 1;
  std::vector<int> breaks;
  for (int t = 0; t < pieces - 1; ++t) {
    int pick = t + draw(static_cast<std::uint64_t>(positions.size() - t));
    std::swap(positions[t], positions[pick]);
    breaks.push_back(positions[t]);
  }
  std::sort(breaks.begin(), breaks.end());

  std::vector<double> levels(pieces);
  int prev = 0;
  for (int p = 0; p < pieces; ++p) {
    int lvl;
    do {
      int magnitude = 1 + draw(4);
      lvl = draw(2) == 0 ? magnitude : -magnitude;
    } while (lvl == prev);
    levels[p] = lvl;
    prev = lvl;
  }

  std::vector<double> x(n);
  int seg = 0;
  for (int i = 0; i < n; ++i) {
    while (seg < pieces - 1 && i >= breaks[seg]) ++seg;
    x[i] = levels[seg];
  }
  return x;
}

GroupStructure hierarchy_groups(const TreeModel& t) {
  std::vector<std::vector<int>> groups(t.size());
  for (int v = 0; v < t.size(); ++v) {
    groups[v] = t.ancestors_and_self(v);
    std::sort(groups[v].begin(), groups[v].end());
  }
  return build_structure(t.size(), std::move(groups));
}

GroupStructure parent_child_groups(const TreeModel& t) {
  std::vector<std::vector<int>> groups;
  groups.push_back({t.root});
  for (int v = 0; v < t.size(); ++v)
    if (v != t.root) groups.push_back({std::min(t.parent[v], v), std::max(t.parent[v], v)});
  return build_structure(t.size(), std::move(groups));
}

}  // namespace groupsel
