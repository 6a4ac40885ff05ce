#include "groupsel/group_structure.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <string>

#include "groupsel/errors.hpp"
#include "groupsel/exact.hpp"

namespace groupsel {

bool GroupStructure::contains(int group, int element) const {
  const auto& g = groups[group];
  return std::binary_search(g.begin(), g.end(), element);
}

std::vector<std::vector<std::uint8_t>> GroupStructure::biadjacency() const {
  std::vector<std::vector<std::uint8_t>> a(ground_size,
                                           std::vector<std::uint8_t>(groups.size(), 0));
  for (std::size_t j = 0; j < groups.size(); ++j)
    for (int i : groups[j]) a[i][j] = 1;
  return a;
}

GroupStructure build_structure(int ground_size, std::vector<std::vector<int>> groups) {
  if (ground_size <= 0) fail(Errc::index_out_of_range, "ground_size must be positive");
  if (groups.empty()) fail(Errc::empty_group, "structure needs at least one group");

  GroupStructure s;
  s.ground_size = ground_size;
  s.groups = std::move(groups);

  for (std::size_t j = 0; j < s.groups.size(); ++j) {
    auto& g = s.groups[j];
    if (g.empty()) fail(Errc::empty_group, "group " + std::to_string(j + 1) + " is empty");
    std::sort(g.begin(), g.end());
    for (std::size_t t = 0; t < g.size(); ++t) {
      if (g[t] < 0 || g[t] >= ground_size)
        fail(Errc::index_out_of_range,
             "group " + std::to_string(j + 1) + " references element " + std::to_string(g[t] + 1));
      if (t > 0 && g[t] == g[t - 1])
        fail(Errc::duplicate_index, "group " + std::to_string(j + 1) + " repeats element " +
                                        std::to_string(g[t] + 1));
    }
  }

  // Exact duplicates are rejected; the paper leaves them undefined.
  std::map<std::vector<int>, int> seen;
  for (std::size_t j = 0; j < s.groups.size(); ++j) {
    auto [it, inserted] = seen.emplace(s.groups[j], static_cast<int>(j));
    if (!inserted)
      fail(Errc::duplicate_group, "groups " + std::to_string(it->second + 1) + " and " +
                                      std::to_string(j + 1) + " are identical");
  }

  s.memberships.assign(ground_size, {});
  for (std::size_t j = 0; j < s.groups.size(); ++j)
    for (int i : s.groups[j]) s.memberships[i].push_back(static_cast<int>(j));
  for (int i = 0; i < ground_size; ++i)
    if (s.memberships[i].empty())
      fail(Errc::uncovered_element, "element " + std::to_string(i + 1) + " is in no group");

  // Group graph with intersection labels.
  const int m = s.num_groups();
  std::map<std::pair<int, int>, std::vector<int>> overlaps;
  for (int i = 0; i < ground_size; ++i) {
    const auto& mem = s.memberships[i];
    for (std::size_t a = 0; a < mem.size(); ++a)
      for (std::size_t b = a + 1; b < mem.size(); ++b)
        overlaps[{mem[a], mem[b]}].push_back(i);
  }
  s.neighbors.assign(m, {});
  s.edge_of.assign(m, {});
  for (auto& [key, elems] : overlaps) {
    GroupStructure::Edge e;
    e.a = key.first;
    e.b = key.second;
    e.overlap = std::move(elems);
    int id = static_cast<int>(s.edges.size());
    s.neighbors[e.a].push_back(e.b);
    s.edge_of[e.a].push_back(id);
    s.neighbors[e.b].push_back(e.a);
    s.edge_of[e.b].push_back(id);
    s.edges.push_back(std::move(e));
  }
  return s;
}

GroupStructure structure_from_one_based(int ground_size, std::vector<std::vector<int>> groups) {
  for (auto& g : groups)
    for (int& i : g) --i;
  return build_structure(ground_size, std::move(groups));
}

bool is_loopless_pairwise(const GroupStructure& s) {
  for (const auto& mem : s.memberships)
    if (mem.size() > 2) return false;
  // Acyclic iff |E| = |V| - #components.
  int m = s.num_groups();
  std::vector<int> comp(m, -1);
  int ncomp = 0;
  for (int start = 0; start < m; ++start) {
    if (comp[start] != -1) continue;
    std::vector<int> stack{start};
    comp[start] = ncomp;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (int u : s.neighbors[v])
        if (comp[u] == -1) {
          comp[u] = ncomp;
          stack.push_back(u);
        }
    }
    ++ncomp;
  }
  return static_cast<int>(s.edges.size()) == m - ncomp;
}

namespace {

// Reconstructs the node tree whose ancestor-closure groups are exactly the
// given ones: one singleton (the root), and every size-k group extends exactly
// one size-(k-1) group by one new element.
std::optional<TreeModel> reconstruct_hierarchy(const GroupStructure& s) {
  const int m = s.num_groups();
  if (m != s.ground_size) return std::nullopt;

  std::map<std::vector<int>, int> by_content;
  for (int j = 0; j < m; ++j) by_content[s.groups[j]] = j;

  std::vector<int> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return s.groups[a].size() < s.groups[b].size();
  });

  std::vector<int> parent(s.ground_size, -2);
  std::vector<int> node_of_group(m, -1);
  int roots = 0;
  for (int j : order) {
    const auto& g = s.groups[j];
    if (g.size() == 1) {
      if (++roots > 1 || parent[g[0]] != -2) return std::nullopt;
      parent[g[0]] = -1;
      node_of_group[j] = g[0];
      continue;
    }
    int new_elem = -1, parent_group = -1;
    std::vector<int> reduced(g.begin(), g.end() - 1);
    for (std::size_t drop = g.size(); drop-- > 0;) {
      // reduced = g without g[drop]
      auto it = by_content.find(reduced);
      if (it != by_content.end()) {
        if (new_elem != -1) return std::nullopt;  // extends more than one group
        new_elem = g[drop];
        parent_group = it->second;
      }
      if (drop > 0) reduced[drop - 1] = g[drop];
    }
    if (new_elem == -1 || parent[new_elem] != -2) return std::nullopt;
    if (node_of_group[parent_group] == -1) return std::nullopt;  // parent not placed yet
    parent[new_elem] = node_of_group[parent_group];
    node_of_group[j] = new_elem;
  }
  for (int i = 0; i < s.ground_size; ++i)
    if (parent[i] == -2) return std::nullopt;
  return TreeModel::from_parents(std::move(parent), {});
}

// Any cycle in the group graph, as a closed walk of group ids (the repeated
// endpoint omitted). Recursive DFS; a back edge to a node still on the stack
// closes the cycle along the parent chain.
std::vector<int> find_cycle(const GroupStructure& s) {
  const int m = s.num_groups();
  std::vector<int> state(m, 0);  // 0 new, 1 on stack, 2 done
  std::vector<int> parent(m, -1);
  std::vector<int> cyc;
  std::function<bool(int, int)> dfs = [&](int v, int par) -> bool {
    state[v] = 1;
    for (int u : s.neighbors[v]) {
      if (u == par) continue;
      if (state[u] == 1) {
        for (int x = v; x != u; x = parent[x]) cyc.push_back(x);
        cyc.push_back(u);
        return true;
      }
      if (state[u] == 0) {
        parent[u] = v;
        if (dfs(u, v)) return true;
      }
    }
    state[v] = 2;
    return false;
  };
  for (int r = 0; r < m; ++r)
    if (state[r] == 0 && dfs(r, -1)) return cyc;
  return {};
}

}  // namespace

StructureClass classify(const GroupStructure& s) {
  StructureClass c;
  if (auto tree = reconstruct_hierarchy(s)) {
    c.tag = StructureTag::Hierarchical;
    c.hierarchy = std::move(*tree);
    return c;
  }
  if (is_loopless_pairwise(s)) {
    c.tag = StructureTag::LooplessPairwise;
    for (const auto& e : s.edges) c.forest.emplace_back(e.a, e.b);
    return c;
  }
  c.tag = StructureTag::General;
  for (int i = 0; i < s.ground_size; ++i)
    if (s.memberships[i].size() > 2) {
      c.element_in_many = i;
      break;
    }
  if (!c.element_in_many) c.cycle = find_cycle(s);
  return c;
}

std::string StructureClass::describe() const {
  switch (tag) {
    case StructureTag::LooplessPairwise:
      return "LooplessPairwise";
    case StructureTag::Hierarchical:
      return "Hierarchical";
    case StructureTag::General: {
      std::string out = "General";
      if (element_in_many) {
        out += " (element " + std::to_string(*element_in_many + 1) + " in >2 groups)";
      } else if (!cycle.empty()) {
        out += " (loop ";
        for (std::size_t i = 0; i < cycle.size(); ++i) {
          if (i) out += "-";
          out += "G" + std::to_string(cycle[i] + 1);
        }
        out += ")";
      }
      return out;
    }
  }
  return "General";
}

bool is_group_cover(const GroupStructure& s, const std::vector<int>& active_groups,
                    const std::vector<double>& x) {
  if (static_cast<int>(x.size()) != s.ground_size)
    fail(Errc::dimension_mismatch, "signal length does not match ground size");
  std::vector<std::uint8_t> covered(s.ground_size, 0);
  for (int j : active_groups) {
    if (j < 0 || j >= s.num_groups()) fail(Errc::index_out_of_range, "group id out of range");
    for (int i : s.groups[j]) covered[i] = 1;
  }
  for (int i = 0; i < s.ground_size; ++i)
    if (x[i] != 0.0 && !covered[i]) return false;
  return true;
}

namespace {

std::vector<std::uint8_t> cover_union(const GroupStructure& s, const std::vector<int>& groups) {
  std::vector<std::uint8_t> covered(s.ground_size, 0);
  for (int j : groups)
    for (int i : s.groups[j]) covered[i] = 1;
  return covered;
}

// Minimum number of groups from `active` covering all of `need`; -1 if not
// coverable. Loopless-pairwise structures only (one DP sweep).
int min_cover_size_dp(const GroupStructure& s, const std::vector<int>& active,
                      const std::vector<std::uint8_t>& need, int needed_count, int budget) {
  if (needed_count == 0) return 0;
  if (active.empty() || budget <= 0) return -1;
  std::vector<double> w01(s.ground_size, 0.0);
  for (int i = 0; i < s.ground_size; ++i)
    if (need[i]) w01[i] = 1.0;
  auto values = gwmc_dp_values(s, active, w01, budget, s.ground_size);
  for (int g = 1; g <= budget; ++g)
    if (values[g] > needed_count - 0.5) return g;
  return -1;
}

// Lexicographically smallest cover of minimum size, brute force (general
// structures): subsets enumerated by size then lexicographic order.
std::vector<int> lex_min_cover_brute(const GroupStructure& s, const std::vector<std::uint8_t>& need,
                                     int needed_count) {
  const int m = s.num_groups();
  std::vector<int> chosen;
  std::vector<int> best;
  bool found = false;
  // DFS in lexicographic order; the first cover found at each size is lex-min.
  auto count_covered = [&](const std::vector<int>& sel) {
    auto cov = cover_union(s, sel);
    int c = 0;
    for (int i = 0; i < s.ground_size; ++i)
      if (need[i] && cov[i]) ++c;
    return c;
  };
  for (int size = 1; size <= m && !found; ++size) {
    std::vector<int> stack;
    std::function<bool(int)> rec = [&](int start) -> bool {
      if (count_covered(stack) == needed_count && static_cast<int>(stack.size()) <= size) {
        best = stack;
        return true;
      }
      if (static_cast<int>(stack.size()) == size) return false;
      for (int j = start; j < m; ++j) {
        stack.push_back(j);
        if (rec(j + 1)) return true;
        stack.pop_back();
      }
      return false;
    };
    found = rec(0);
  }
  return best;
}

}  // namespace

MinimalCover group_l0_norm(const GroupStructure& s, const std::vector<double>& x) {
  if (static_cast<int>(x.size()) != s.ground_size)
    fail(Errc::dimension_mismatch, "signal length does not match ground size");
  MinimalCover result;
  std::vector<std::uint8_t> need(s.ground_size, 0);
  int needed = 0;
  for (int i = 0; i < s.ground_size; ++i)
    if (x[i] != 0.0) {
      need[i] = 1;
      ++needed;
    }
  if (needed == 0) return result;

  const int m = s.num_groups();
  if (is_loopless_pairwise(s)) {
    std::vector<int> all(m);
    std::iota(all.begin(), all.end(), 0);
    int norm = min_cover_size_dp(s, all, need, needed, m);
    result.norm = norm;
    // Lexicographically smallest achieving set: keep group j iff the rest of
    // the budget still covers the remainder using later groups only.
    std::vector<int> chosen;
    std::vector<std::uint8_t> remaining = need;
    int remaining_count = needed;
    for (int j = 0; j < m && remaining_count > 0; ++j) {
      std::vector<std::uint8_t> after = remaining;
      int after_count = remaining_count;
      for (int i : s.groups[j])
        if (after[i]) {
          after[i] = 0;
          --after_count;
        }
      std::vector<int> later;
      for (int t = j + 1; t < m; ++t) later.push_back(t);
      int rest = min_cover_size_dp(s, later, after, after_count, norm - 1 - static_cast<int>(chosen.size()));
      if (after_count == 0) rest = 0;
      if (rest >= 0 && static_cast<int>(chosen.size()) + 1 + rest <= norm) {
        chosen.push_back(j);
        remaining = std::move(after);
        remaining_count = after_count;
      }
    }
    result.cover = std::move(chosen);
    return result;
  }

  if (m > 20)
    fail(Errc::instance_too_large,
         "general structure with M > 20; exact minimal cover is capped at 20 groups");
  result.cover = lex_min_cover_brute(s, need, needed);
  result.norm = static_cast<int>(result.cover.size());
  return result;
}

namespace {

bool rows_consecutive_under_order(const GroupStructure& s, const std::vector<int>& col_order) {
  std::vector<int> pos(s.num_groups());
  for (std::size_t p = 0; p < col_order.size(); ++p) pos[col_order[p]] = static_cast<int>(p);
  for (int i = 0; i < s.ground_size; ++i) {
    const auto& mem = s.memberships[i];
    int lo = s.num_groups(), hi = -1;
    for (int j : mem) {
      lo = std::min(lo, pos[j]);
      hi = std::max(hi, pos[j]);
    }
    if (hi - lo + 1 != static_cast<int>(mem.size())) return false;
  }
  return true;
}

}  // namespace

const char* tu_certificate_name(TuCertificate c) {
  switch (c) {
    case TuCertificate::LooplessPairwiseTU:
      return "LooplessPairwiseTU";
    case TuCertificate::ConsecutiveOnesTU:
      return "ConsecutiveOnesTU";
    default:
      return "Unknown";
  }
}

TuCertificate tu_certificate(const GroupStructure& s) {
  StructureClass c = classify(s);
  if (c.tag == StructureTag::LooplessPairwise) return TuCertificate::LooplessPairwiseTU;
  if (c.tag == StructureTag::Hierarchical) {
    // Depth-first ordering of the reconstructed tree: element i lies exactly
    // in the groups of its subtree nodes, which are contiguous in pre-order.
    const TreeModel& t = *c.hierarchy;
    // The defining node of an ancestor-closure group is its deepest element.
    std::vector<int> node_to_group(s.ground_size, -1);
    for (int j = 0; j < s.num_groups(); ++j) {
      int deepest = s.groups[j][0];
      for (int i : s.groups[j])
        if (t.depth(i) > t.depth(deepest)) deepest = i;
      node_to_group[deepest] = j;
    }
    std::vector<int> order;
    std::vector<int> stack{t.root};
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      order.push_back(node_to_group[v]);
      auto kids = t.children[v];
      std::sort(kids.rbegin(), kids.rend());
      for (int k : kids) stack.push_back(k);
    }
    if (rows_consecutive_under_order(s, order)) return TuCertificate::ConsecutiveOnesTU;
    return TuCertificate::Unknown;
  }
  // General structures: interval test in the given column order.
  std::vector<int> identity(s.num_groups());
  std::iota(identity.begin(), identity.end(), 0);
  if (rows_consecutive_under_order(s, identity)) return TuCertificate::ConsecutiveOnesTU;
  return TuCertificate::Unknown;
}

}  // namespace groupsel
