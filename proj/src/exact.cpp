#include <algorithm>
#include <bit>
#include <limits>
#include <numeric>

#include "groupsel/errors.hpp"
#include "groupsel/exact.hpp"
#include "groupsel/simd_kernels.hpp"

namespace groupsel {

std::vector<int> Selection::group_indices() const {
  std::vector<int> out;
  for (std::size_t j = 0; j < groups.size(); ++j)
    if (groups[j]) out.push_back(static_cast<int>(j));
  return out;
}

std::vector<int> Selection::element_indices() const {
  std::vector<int> out;
  for (std::size_t i = 0; i < elements.size(); ++i)
    if (elements[i]) out.push_back(static_cast<int>(i));
  return out;
}

int Selection::num_groups() const {
  return static_cast<int>(std::count(groups.begin(), groups.end(), 1));
}

int Selection::num_elements() const {
  return static_cast<int>(std::count(elements.begin(), elements.end(), 1));
}

std::vector<double> squared_weights(const std::vector<double>& x) {
  std::vector<double> w(x.size());
  kern::square(x.data(), w.data(), x.size());
  return w;
}

TopK top_k_weight(std::span<const int> set, const std::vector<double>& w, int k) {
  TopK out;
  if (k < 0) fail(Errc::budget_out_of_range, "k must be non-negative");
  std::vector<int> idx(set.begin(), set.end());
  std::sort(idx.begin(), idx.end(), [&](int a, int b) {
    if (w[a] != w[b]) return w[a] > w[b];
    return a < b;
  });
  const int take = std::min<int>(k, static_cast<int>(idx.size()));
  out.indices.assign(idx.begin(), idx.begin() + take);
  for (int i : out.indices) out.total += w[i];
  std::sort(out.indices.begin(), out.indices.end());
  return out;
}

namespace {

void check_weights(const GroupStructure& s, const std::vector<double>& w) {
  if (static_cast<int>(w.size()) != s.ground_size)
    fail(Errc::dimension_mismatch, "weight vector length does not match ground size");
  for (double v : w)
    if (v < 0.0) fail(Errc::dimension_mismatch, "weights must be non-negative");
}

Selection make_selection(const GroupStructure& s, const std::vector<int>& groups,
                         const std::vector<int>& elements, const std::vector<double>& w) {
  Selection sel;
  sel.groups.assign(s.num_groups(), 0);
  sel.elements.assign(s.ground_size, 0);
  for (int j : groups) sel.groups[j] = 1;
  for (int i : elements) {
    sel.elements[i] = 1;
    sel.objective += w[i];
  }
  return sel;
}

}  // namespace

Selection greedy_wmc(const GroupStructure& s, const std::vector<double>& w, int G) {
  check_weights(s, w);
  if (G < 1) fail(Errc::budget_out_of_range, "G must be positive");
  Selection sel;
  sel.groups.assign(s.num_groups(), 0);
  sel.elements.assign(s.ground_size, 0);
  for (int round = 0; round < G; ++round) {
    int best = -1;
    double best_gain = 0.0;
    for (int j = 0; j < s.num_groups(); ++j) {
      if (sel.groups[j]) continue;
      double gain = 0.0;
      for (int i : s.groups[j])
        if (!sel.elements[i]) gain += w[i];
      if (gain > best_gain) {
        best_gain = gain;
        best = j;
      }
    }
    if (best < 0) break;  // nothing adds weight; all of it is covered
    sel.groups[best] = 1;
    for (int i : s.groups[best]) sel.elements[i] = 1;
    sel.objective += best_gain;
  }
  return sel;
}

GroupForest rooted_group_forest(const GroupStructure& s, const std::vector<int>& active) {
  const int m = s.num_groups();
  std::vector<std::uint8_t> is_active(m, active.empty() ? 1 : 0);
  for (int j : active) is_active[j] = 1;

  GroupForest f;
  f.parent.assign(m, -2);
  f.children.assign(m, {});
  for (int start = 0; start < m; ++start) {
    if (!is_active[start] || f.parent[start] != -2) continue;
    f.parent[start] = -1;
    f.roots.push_back(start);
    std::vector<int> stack{start};
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (int u : s.neighbors[v]) {
        if (!is_active[u]) continue;
        if (u == f.parent[v]) continue;
        if (f.parent[u] != -2)
          fail(Errc::not_loopless_pairwise, "group graph contains a loop");
        f.parent[u] = v;
        f.children[v].push_back(u);
        stack.push_back(u);
      }
    }
  }
  for (auto& c : f.children) std::sort(c.begin(), c.end());
  return f;
}

namespace {

int lowest_id_in_subtree(const GroupForest& f, int node) {
  int best = node;
  std::vector<int> stack{node};
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    best = std::min(best, v);
    for (int c : f.children[v]) stack.push_back(c);
  }
  return best;
}

void order_rec(const GroupForest& f, int node, std::vector<int>& out) {
  // Child subtrees by non-increasing D-value, ties by lowest group id.
  struct Sub {
    int child;
    int d;
    int low;
  };
  std::vector<Sub> subs;
  for (int c : f.children[node]) subs.push_back({c, dvalue(f, c), lowest_id_in_subtree(f, c)});
  std::sort(subs.begin(), subs.end(), [](const Sub& a, const Sub& b) {
    if (a.d != b.d) return a.d > b.d;
    return a.low < b.low;
  });
  if (!subs.empty()) order_rec(f, subs[0].child, out);
  out.push_back(node);
  for (std::size_t i = 1; i < subs.size(); ++i) order_rec(f, subs[i].child, out);
}

}  // namespace

int dvalue(const GroupForest& f, int node) {
  std::vector<int> child_values;
  for (int c : f.children[node]) child_values.push_back(dvalue(f, c));
  if (child_values.empty()) return 1;
  std::sort(child_values.rbegin(), child_values.rend());
  int d2 = child_values.size() > 1 ? child_values[1] : 0;
  return std::max(child_values[0], d2 + 1);
}

std::vector<int> node_order(const GroupForest& f) {
  std::vector<int> out;
  for (int r : f.roots) order_rec(f, r, out);
  return out;
}

Selection brute_force_wmc(const GroupStructure& s, const std::vector<double>& w, int G,
                          std::optional<int> K) {
  check_weights(s, w);
  const int m = s.num_groups();
  if (m > 20) fail(Errc::instance_too_large, "brute force is capped at 20 groups");
  if (G < 0) fail(Errc::budget_out_of_range, "G must be non-negative");

  double best = -1.0;
  std::vector<int> best_groups, best_elems;
  for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
    if (std::popcount(mask) > G) continue;
    std::vector<int> groups;
    std::vector<std::uint8_t> covered(s.ground_size, 0);
    for (int j = 0; j < m; ++j)
      if (mask & (1u << j)) {
        groups.push_back(j);
        for (int i : s.groups[j]) covered[i] = 1;
      }
    std::vector<int> covered_idx;
    for (int i = 0; i < s.ground_size; ++i)
      if (covered[i] && w[i] > 0.0) covered_idx.push_back(i);
    double value;
    std::vector<int> elems;
    if (K) {
      TopK tk = top_k_weight(covered_idx, w, *K);
      value = tk.total;
      elems = std::move(tk.indices);
    } else {
      value = 0.0;
      for (int i : covered_idx) value += w[i];
      elems = std::move(covered_idx);
    }
    if (value > best + 1e-12) {
      best = value;
      best_groups = std::move(groups);
      best_elems = std::move(elems);
    }
  }
  return make_selection(s, best_groups, best_elems, w);
}

std::vector<double> brute_force_wmc_values(const GroupStructure& s, const std::vector<double>& w,
                                           std::optional<int> K) {
  check_weights(s, w);
  const int m = s.num_groups();
  if (m > 20) fail(Errc::instance_too_large, "brute force is capped at 20 groups");
  std::vector<double> best(m + 1, 0.0);
  for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
    std::vector<std::uint8_t> covered(s.ground_size, 0);
    for (int j = 0; j < m; ++j)
      if (mask & (1u << j))
        for (int i : s.groups[j]) covered[i] = 1;
    std::vector<int> covered_idx;
    for (int i = 0; i < s.ground_size; ++i)
      if (covered[i]) covered_idx.push_back(i);
    double value = 0.0;
    if (K) {
      value = top_k_weight(covered_idx, w, *K).total;
    } else {
      for (int i : covered_idx) value += w[i];
    }
    int g = std::popcount(mask);
    best[g] = std::max(best[g], value);
  }
  for (int g = 1; g <= m; ++g) best[g] = std::max(best[g], best[g - 1]);
  return best;
}

namespace {

struct HierTables {
  // F[x] has (deg(x)+1) rows of (K+1) values; F[x][i][k] = best rooted
  // subtree at x with at most k nodes using only the first i children.
  std::vector<std::vector<std::vector<double>>> value;
  std::vector<std::vector<std::vector<int>>> split;  // chosen child budget t
  int K = 0;
};

HierTables hier_dp_tables(const TreeModel& t, int K) {
  const int n = t.size();
  HierTables tab;
  tab.K = K;
  tab.value.resize(n);
  tab.split.resize(n);

  // Post-order via iterative DFS.
  std::vector<int> order;
  std::vector<int> stack{t.root};
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    order.push_back(v);
    for (int c : t.children[v]) stack.push_back(c);
  }
  std::reverse(order.begin(), order.end());

  for (int x : order) {
    const auto& kids = t.children[x];
    const int deg = static_cast<int>(kids.size());
    tab.value[x].assign(deg + 1, std::vector<double>(K + 1, 0.0));
    tab.split[x].assign(deg + 1, std::vector<int>(K + 1, 0));
    for (int k = 1; k <= K; ++k) tab.value[x][0][k] = t.weights[x];
    for (int i = 1; i <= deg; ++i) {
      int c = kids[i - 1];
      const auto& child_g = tab.value[c][t.children[c].size()];
      for (int k = 1; k <= K; ++k) {
        double best = -1.0;
        int best_t = 0;
        // Ties go to the larger child budget: within the at-most-K budget the
        // larger rooted-connected set is reported.
        for (int give = 0; give <= k - 1; ++give) {
          double cand = tab.value[x][i - 1][k - give] + (give > 0 ? child_g[give] : 0.0);
          if (cand >= best) {
            best = cand;
            best_t = give;
          }
        }
        tab.value[x][i][k] = best;
        tab.split[x][i][k] = best_t;
      }
    }
  }
  return tab;
}

void hier_backtrack(const TreeModel& t, const HierTables& tab, int x, int k,
                    std::vector<int>& out) {
  if (k <= 0) return;
  out.push_back(x);
  const auto& kids = t.children[x];
  int budget = k;
  for (int i = static_cast<int>(kids.size()); i >= 1; --i) {
    int give = tab.split[x][i][budget];
    if (give > 0) hier_backtrack(t, tab, kids[i - 1], give, out);
    budget -= give;
  }
}

}  // namespace

TreeSelection solve_hierarchical_dp(const TreeModel& t, int K) {
  if (K < 1 || K > t.size()) fail(Errc::budget_out_of_range, "K must be in [1, N]");
  HierTables tab = hier_dp_tables(t, K);
  TreeSelection out;
  out.objective = tab.value[t.root][t.children[t.root].size()][K];
  hier_backtrack(t, tab, t.root, K, out.nodes);
  std::sort(out.nodes.begin(), out.nodes.end());
  return out;
}

std::vector<TreeSelection> solve_hierarchical_dp_sweep(const TreeModel& t, int K) {
  if (K < 1 || K > t.size()) fail(Errc::budget_out_of_range, "K must be in [1, N]");
  HierTables tab = hier_dp_tables(t, K);
  std::vector<TreeSelection> out;
  for (int k = 1; k <= K; ++k) {
    TreeSelection sel;
    sel.objective = tab.value[t.root][t.children[t.root].size()][k];
    hier_backtrack(t, tab, t.root, k, sel.nodes);
    std::sort(sel.nodes.begin(), sel.nodes.end());
    out.push_back(std::move(sel));
  }
  return out;
}

TreeSelection brute_force_hier(const TreeModel& t, int K) {
  const int n = t.size();
  if (n > 18) fail(Errc::instance_too_large, "hierarchical brute force is capped at 18 nodes");
  if (K < 1) fail(Errc::budget_out_of_range, "K must be positive");

  TreeSelection best;
  best.objective = -1.0;
  int best_count = -1;
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    int count = std::popcount(mask);
    if (count > K) continue;
    if (!(mask & (1u << t.root))) continue;
    bool connected = true;
    double value = 0.0;
    for (int v = 0; v < n && connected; ++v) {
      if (!(mask & (1u << v))) continue;
      if (v != t.root && !(mask & (1u << t.parent[v]))) connected = false;
      value += t.weights[v];
    }
    if (!connected) continue;
    if (value > best.objective + 1e-12 ||
        (value > best.objective - 1e-12 && count > best_count)) {
      best.objective = std::max(best.objective, value);
      best_count = count;
      best.nodes.clear();
      for (int v = 0; v < n; ++v)
        if (mask & (1u << v)) best.nodes.push_back(v);
    }
  }
  if (best.objective < 0.0) best.objective = 0.0;
  return best;
}

}  // namespace groupsel
