#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "groupsel/tree_model.hpp"

namespace groupsel {

// A group structure over the ground set {0..N-1}: M non-empty index sets whose
// union is the ground set. Immutable after build_structure; the overlap graph
// and per-edge intersections are precomputed so DP cleaning is a lookup.
struct GroupStructure {
  int ground_size = 0;                        // N
  std::vector<std::vector<int>> groups;       // sorted member lists, size M
  std::vector<std::vector<int>> memberships;  // per element: groups containing it

  struct Edge {
    int a = 0, b = 0;              // group ids, a < b
    std::vector<int> overlap;      // sorted intersection
  };
  std::vector<Edge> edges;                    // group graph
  std::vector<std::vector<int>> neighbors;    // per group: adjacent group ids
  std::vector<std::vector<int>> edge_of;      // per group: edge index aligned with neighbors

  int num_groups() const { return static_cast<int>(groups.size()); }
  bool contains(int group, int element) const;

  // Dense N x M bi-adjacency table, entry (i,j) = 1 iff i is in group j.
  std::vector<std::vector<std::uint8_t>> biadjacency() const;
};

// Validates and builds a structure from 0-based member lists.
GroupStructure build_structure(int ground_size, std::vector<std::vector<int>> groups);
// Convenience for the 1-based external convention (files, paper examples).
GroupStructure structure_from_one_based(int ground_size, std::vector<std::vector<int>> groups);

enum class StructureTag { LooplessPairwise, Hierarchical, General };

struct StructureClass {
  StructureTag tag = StructureTag::General;
  // LooplessPairwise: the group graph itself is the spanning forest.
  std::vector<std::pair<int, int>> forest;
  // Hierarchical: reconstructed node tree; node ids are ground elements.
  std::optional<TreeModel> hierarchy;
  // General: an element in more than two groups, or a group-graph cycle.
  std::optional<int> element_in_many;
  std::vector<int> cycle;  // group ids, closed walk without the repeated end

  std::string describe() const;
};

// Every element in at most two groups and the group graph is acyclic.
bool is_loopless_pairwise(const GroupStructure& s);

// Tests Hierarchical first (ancestor-closure reconstruction), then loopless
// pairwise, else General with a witness.
StructureClass classify(const GroupStructure& s);

// True iff supp(x) is contained in the union of the active groups.
bool is_group_cover(const GroupStructure& s, const std::vector<int>& active_groups,
                    const std::vector<double>& x);

struct MinimalCover {
  int norm = 0;
  std::vector<int> cover;  // 0-based group ids, ascending; lexicographically
                           // smallest among covers of minimum cardinality
};

// Group l0-"norm": minimum number of groups covering supp(x), with one
// achieving cover. DP on loopless-pairwise structures, brute force (M <= 20)
// otherwise.
MinimalCover group_l0_norm(const GroupStructure& s, const std::vector<double>& x);

enum class TuCertificate { LooplessPairwiseTU, ConsecutiveOnesTU, Unknown };

const char* tu_certificate_name(TuCertificate c);

// Sufficient conditions only; Unknown means both tests failed, not "not TU".
TuCertificate tu_certificate(const GroupStructure& s);

}  // namespace groupsel
