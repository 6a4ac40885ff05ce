#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "groupsel/group_structure.hpp"
#include "groupsel/relax.hpp"
#include "groupsel/signals.hpp"

namespace groupsel::io {

// {"ground_size": N, "groups": [[...], ...]} with 1-based indices; duplicate
// indices within a group are rejected.
GroupStructure read_structure_json(const std::string& path);
GroupStructure parse_structure_json(const std::string& text);
std::string structure_to_json(const GroupStructure& s);
void write_structure_json(const std::string& path, const GroupStructure& s);

// Headerless single-column CSV.
std::vector<double> read_signal_csv(const std::string& path);
void write_signal_csv(const std::string& path, const std::vector<double>& x);

// Columns index,value,parent_index (1-based; the root's parent is 0).
void write_haar_csv(std::ostream& out, const HaarCoefficients& c);

// Columns G,f_of_G,on_hull,lambda_attaining,group_indices.
void write_frontier_csv(std::ostream& out, const ParetoFrontier& f);

std::string fmt_double(double v);

}  // namespace groupsel::io
