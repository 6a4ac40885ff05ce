// Dynamic program for weighted maximum coverage with group and element
// budgets on loopless pairwise overlapping structures. Nodes of the group
// graph are explored in D-value order; the table stores, for every
// picked/forbidden assignment of the current boundary nodes and every
// (g, k) budget pair, the best coverable weight among explored nodes.
#include <algorithm>
#include <limits>
#include <numeric>

#include "groupsel/errors.hpp"
#include "groupsel/exact.hpp"

namespace groupsel {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

struct Cell {
  double val = 0.0;
  std::uint32_t prev_mask = 0;  // assignment of the previous step's boundary
  std::int16_t ell = -1;        // elements drawn from the new node
  std::uint8_t accepted = 0;
};

struct StepTable {
  std::vector<int> boundary;            // group ids, ascending
  std::vector<Cell> cells;              // (1<<|boundary|) * (G+1) * (K+1)
  std::vector<int> explored_neighbors;  // of the node explored this step
  std::vector<int> en_prev_pos;         // their positions in the previous boundary
};

inline std::uint32_t insert_bit(std::uint32_t mask, int pos, std::uint32_t bit) {
  std::uint32_t low = mask & ((1u << pos) - 1u);
  std::uint32_t high = mask >> pos;
  return low | (bit << pos) | (high << (pos + 1));
}

class DpEngine {
public:
  DpEngine(const GroupStructure& s, const std::vector<double>& w, int G, int K, bool condense,
           bool keep_steps)
      : s_(s), w_(w), G_(G), K_(K), condense_(condense), keep_steps_(keep_steps) {}

  void run(const std::vector<int>& active);

  double value_at(int g, int k) const;
  Selection backtrack(int g, int k) const;
  const DpStats& stats() const { return stats_; }
  int explored_count() const { return static_cast<int>(order_.size()); }

private:
  std::size_t idx(std::size_t mask, int g, int k) const {
    return (mask * (G_ + 1) + g) * (K_ + 1) + k;
  }

  // Elements of group X with positive weight not already owned by a selected
  // explored neighbor; each element lies in at most two groups, so the check
  // is a membership lookup.
  std::vector<int> cleaned_elements(int X, const std::vector<int>& en,
                                    std::uint32_t selected_en_mask) const;

  const GroupStructure& s_;
  const std::vector<double>& w_;
  int G_, K_;
  bool condense_, keep_steps_;
  std::vector<int> order_;
  std::vector<std::uint8_t> is_active_;
  std::vector<StepTable> steps_;  // all steps when keep_steps_, else just the last
  DpStats stats_;
};

std::vector<int> DpEngine::cleaned_elements(int X, const std::vector<int>& en,
                                            std::uint32_t selected_en_mask) const {
  std::vector<int> keep;
  for (int i : s_.groups[X]) {
    if (w_[i] <= 0.0) continue;
    bool owned = false;
    for (int j : s_.memberships[i]) {
      if (j == X || !is_active_[j]) continue;
      for (std::size_t t = 0; t < en.size(); ++t)
        if (en[t] == j && (selected_en_mask & (1u << t))) owned = true;
    }
    if (!owned) keep.push_back(i);
  }
  std::sort(keep.begin(), keep.end(), [&](int a, int b) {
    if (w_[a] != w_[b]) return w_[a] > w_[b];
    return a < b;
  });
  return keep;
}

void DpEngine::run(const std::vector<int>& active) {
  GroupForest forest = rooted_group_forest(s_, active);
  order_ = node_order(forest);
  const int m_total = static_cast<int>(order_.size());

  is_active_.assign(s_.num_groups(), active.empty() ? 1 : 0);
  for (int j : active) is_active_[j] = 1;
  {
    std::vector<int> amem(s_.ground_size, 0);
    for (int j = 0; j < s_.num_groups(); ++j)
      if (is_active_[j])
        for (int i : s_.groups[j])
          if (++amem[i] > 2)
            fail(Errc::not_loopless_pairwise, "element in more than two active groups");
  }

  steps_.clear();
  if (keep_steps_) steps_.reserve(m_total + 1);

  StepTable base;
  base.cells.assign(idx(1, 0, 0), Cell{});  // one mask, all zeros
  steps_.push_back(std::move(base));

  std::vector<std::uint8_t> explored(s_.num_groups(), 0);
  for (int m = 0; m < m_total; ++m) {
    const StepTable& prev = steps_.back();
    const int X = order_[m];
    const auto& bp = prev.boundary;
    const int pb = static_cast<int>(bp.size());

    std::vector<int> en, en_pos;
    for (int u : s_.neighbors[X])
      if (is_active_[u] && explored[u]) {
        en.push_back(u);
        en_pos.push_back(static_cast<int>(
            std::lower_bound(bp.begin(), bp.end(), u) - bp.begin()));
      }
    explored[X] = 1;

    std::vector<int> bi = bp;
    const int px = static_cast<int>(std::lower_bound(bi.begin(), bi.end(), X) - bi.begin());
    bi.insert(bi.begin() + px, X);

    std::vector<int> bn;
    if (condense_) {
      for (int v : bi) {
        bool open = false;
        for (int u : s_.neighbors[v])
          if (is_active_[u] && !explored[u]) open = true;
        if (open) bn.push_back(v);
      }
    } else {
      bn = bi;
    }

    // Value-update rules 1-3: reject, or accept with the node cleaned of
    // overlaps with selected boundary neighbors.
    std::vector<Cell> inter(idx(1u << (pb + 1), 0, 0));
    std::vector<std::vector<double>> prefix_cache(1u << en.size());
    std::vector<std::uint8_t> cache_ready(1u << en.size(), 0);

    for (std::uint32_t pm = 0; pm < (1u << pb); ++pm) {
      std::uint32_t sel_key = 0;
      for (std::size_t t = 0; t < en.size(); ++t)
        if (pm & (1u << en_pos[t])) sel_key |= (1u << t);
      if (!cache_ready[sel_key]) {
        auto keep = cleaned_elements(X, en, sel_key);
        std::vector<double> prefix(keep.size() + 1, 0.0);
        for (std::size_t t = 0; t < keep.size(); ++t) prefix[t + 1] = prefix[t] + w_[keep[t]];
        prefix_cache[sel_key] = std::move(prefix);
        cache_ready[sel_key] = 1;
      }
      const auto& prefix = prefix_cache[sel_key];
      const int avail = static_cast<int>(prefix.size()) - 1;

      const std::uint32_t mask_rej = insert_bit(pm, px, 0);
      const std::uint32_t mask_acc = insert_bit(pm, px, 1);
      for (int g = 0; g <= G_; ++g) {
        for (int k = 0; k <= K_; ++k) {
          const Cell& from = prev.cells[idx(pm, g, k)];
          Cell& rej = inter[idx(mask_rej, g, k)];
          rej.val = from.val;
          rej.prev_mask = pm;
          rej.ell = -1;
          rej.accepted = 0;

          Cell& acc = inter[idx(mask_acc, g, k)];
          acc.prev_mask = pm;
          acc.accepted = 1;
          if (g == 0) {
            acc.val = kNegInf;
            acc.ell = -1;
          } else {
            double best = kNegInf;
            int best_ell = 0;
            const int lmax = std::min(k, avail);
            for (int ell = 0; ell <= lmax; ++ell) {
              double cand = prev.cells[idx(pm, g - 1, k - ell)].val + prefix[ell];
              if (cand > best) {
                best = cand;
                best_ell = ell;
              }
            }
            acc.val = best;
            acc.ell = static_cast<std::int16_t>(best_ell);
          }
        }
      }
    }

    // Condensation (rule 4): merge the indicator of every node that fell
    // into the interior, keeping the better of picked/forbidden.
    std::vector<int> cur_b = bi;
    std::vector<Cell> cur = std::move(inter);
    for (int p = static_cast<int>(cur_b.size()) - 1; p >= 0; --p) {
      int v = cur_b[p];
      if (std::binary_search(bn.begin(), bn.end(), v)) continue;
      std::vector<Cell> merged(idx(1u << (cur_b.size() - 1), 0, 0));
      for (std::uint32_t nm = 0; nm < (1u << (cur_b.size() - 1)); ++nm) {
        for (int g = 0; g <= G_; ++g)
          for (int k = 0; k <= K_; ++k) {
            const Cell& c0 = cur[idx(insert_bit(nm, p, 0), g, k)];
            const Cell& c1 = cur[idx(insert_bit(nm, p, 1), g, k)];
            merged[idx(nm, g, k)] = (c1.val > c0.val) ? c1 : c0;
          }
      }
      cur = std::move(merged);
      cur_b.erase(cur_b.begin() + p);
    }

    StepTable st;
    st.boundary = std::move(cur_b);
    st.cells = std::move(cur);
    st.explored_neighbors = en;
    st.en_prev_pos = en_pos;
    stats_.max_boundary = std::max(stats_.max_boundary, static_cast<int>(st.boundary.size()));
    stats_.table_cells += st.cells.size();
    if (keep_steps_) {
      steps_.push_back(std::move(st));
    } else {
      steps_.back() = std::move(st);
    }
  }
}

double DpEngine::value_at(int g, int k) const {
  const StepTable& last = steps_.back();
  const std::uint32_t nmasks = 1u << last.boundary.size();
  double best = kNegInf;
  for (std::uint32_t mask = 0; mask < nmasks; ++mask)
    best = std::max(best, last.cells[idx(mask, g, k)].val);
  return best;
}

Selection DpEngine::backtrack(int g, int k) const {
  Selection sel;
  sel.groups.assign(s_.num_groups(), 0);
  sel.elements.assign(s_.ground_size, 0);

  const StepTable& last = steps_.back();
  std::uint32_t mask = 0;
  {
    const std::uint32_t nmasks = 1u << last.boundary.size();
    double best = kNegInf;
    for (std::uint32_t cand = 0; cand < nmasks; ++cand)
      if (last.cells[idx(cand, g, k)].val > best) {
        best = last.cells[idx(cand, g, k)].val;
        mask = cand;
      }
  }

  for (int m = static_cast<int>(order_.size()) - 1; m >= 0; --m) {
    const StepTable& st = steps_[m + 1];
    const Cell& cell = st.cells[idx(mask, g, k)];
    const int X = order_[m];
    if (cell.accepted) {
      sel.groups[X] = 1;
      std::uint32_t sel_key = 0;
      for (std::size_t t = 0; t < st.explored_neighbors.size(); ++t)
        if (cell.prev_mask & (1u << st.en_prev_pos[t])) sel_key |= (1u << t);
      auto keep = cleaned_elements(X, st.explored_neighbors, sel_key);
      for (int t = 0; t < cell.ell; ++t) {
        sel.elements[keep[t]] = 1;
        sel.objective += w_[keep[t]];
      }
      g -= 1;
      k -= cell.ell;
    }
    mask = cell.prev_mask;
  }
  return sel;
}

void check_weights_dp(const GroupStructure& s, const std::vector<double>& w) {
  if (static_cast<int>(w.size()) != s.ground_size)
    fail(Errc::dimension_mismatch, "weight vector length does not match ground size");
  for (double v : w)
    if (v < 0.0) fail(Errc::dimension_mismatch, "weights must be non-negative");
}

}  // namespace

std::vector<double> gwmc_dp_values(const GroupStructure& s, const std::vector<int>& active,
                                   const std::vector<double>& w, int G, int K, DpOptions opts) {
  check_weights_dp(s, w);
  if (G < 0 || K < 0) fail(Errc::budget_out_of_range, "budgets must be non-negative");
  DpEngine eng(s, w, G, K, opts.use_condensation, /*keep_steps=*/false);
  eng.run(active);
  if (opts.stats) *opts.stats = eng.stats();
  std::vector<double> values(G + 1, 0.0);
  for (int g = 0; g <= G; ++g) values[g] = eng.value_at(g, K);
  return values;
}

Selection solve_gwmc_dp(const GroupStructure& s, const std::vector<double>& w, int G, int K,
                        DpOptions opts) {
  check_weights_dp(s, w);
  if (!is_loopless_pairwise(s))
    fail(Errc::not_loopless_pairwise, "structure is not loopless pairwise overlapping");
  if (G < 1 || G > s.num_groups()) fail(Errc::budget_out_of_range, "G must be in [1, M]");
  if (K < 1 || K > s.ground_size) fail(Errc::budget_out_of_range, "K must be in [1, N]");
  DpEngine eng(s, w, G, K, opts.use_condensation, /*keep_steps=*/true);
  eng.run({});
  if (opts.stats) *opts.stats = eng.stats();
  return eng.backtrack(G, K);
}

Selection solve_wmc_dp(const GroupStructure& s, const std::vector<double>& w, int G,
                       DpOptions opts) {
  return solve_gwmc_dp(s, w, G, s.ground_size, opts);
}

std::vector<Selection> solve_gwmc_dp_sweep(const GroupStructure& s, const std::vector<double>& w,
                                           int G, int K, DpOptions opts) {
  check_weights_dp(s, w);
  if (!is_loopless_pairwise(s))
    fail(Errc::not_loopless_pairwise, "structure is not loopless pairwise overlapping");
  if (G < 1 || G > s.num_groups()) fail(Errc::budget_out_of_range, "G must be in [1, M]");
  if (K < 1 || K > s.ground_size) fail(Errc::budget_out_of_range, "K must be in [1, N]");
  DpEngine eng(s, w, G, K, opts.use_condensation, /*keep_steps=*/true);
  eng.run({});
  if (opts.stats) *opts.stats = eng.stats();
  std::vector<Selection> out;
  out.reserve(G);
  for (int g = 1; g <= G; ++g) out.push_back(eng.backtrack(g, K));
  return out;
}

}  // namespace groupsel
