#include "groupsel/io.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "groupsel/errors.hpp"

namespace groupsel::io {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

GroupStructure parse_structure_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::parse_error, std::string("invalid structure file: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("ground_size") || !doc.contains("groups"))
    fail(Errc::parse_error, "structure file needs ground_size and groups");
  if (!doc["ground_size"].is_number_integer())
    fail(Errc::parse_error, "ground_size must be an integer");
  int n = doc["ground_size"].get<int>();
  if (!doc["groups"].is_array()) fail(Errc::parse_error, "groups must be a list of lists");
  std::vector<std::vector<int>> groups;
  for (const auto& g : doc["groups"]) {
    if (!g.is_array()) fail(Errc::parse_error, "groups must be a list of lists");
    std::vector<int> members;
    for (const auto& e : g) {
      if (!e.is_number_integer()) fail(Errc::parse_error, "group members must be integers");
      members.push_back(e.get<int>());
    }
    groups.push_back(std::move(members));
  }
  return structure_from_one_based(n, std::move(groups));
}

GroupStructure read_structure_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::parse_error, "cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_structure_json(buf.str());
}

std::string structure_to_json(const GroupStructure& s) {
  nlohmann::json doc;
  doc["ground_size"] = s.ground_size;
  auto groups = nlohmann::json::array();
  for (const auto& g : s.groups) {
    auto one = nlohmann::json::array();
    for (int i : g) one.push_back(i + 1);
    groups.push_back(std::move(one));
  }
  doc["groups"] = std::move(groups);
  return doc.dump(2) + "\n";
}

void write_structure_json(const std::string& path, const GroupStructure& s) {
  std::ofstream out(path);
  if (!out) fail(Errc::parse_error, "cannot write " + path);
  out << structure_to_json(s);
}

std::vector<double> read_signal_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::parse_error, "cannot open " + path);
  std::vector<double> x;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      std::size_t pos = 0;
      double v = std::stod(line, &pos);
      while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\r')) ++pos;
      if (pos != line.size()) throw std::invalid_argument("trailing characters");
      x.push_back(v);
    } catch (const std::exception&) {
      fail(Errc::parse_error, path + ":" + std::to_string(lineno) + ": not a number");
    }
  }
  if (x.empty()) fail(Errc::parse_error, path + ": empty signal");
  return x;
}

void write_signal_csv(const std::string& path, const std::vector<double>& x) {
  std::ofstream out(path);
  if (!out) fail(Errc::parse_error, "cannot write " + path);
  for (double v : x) out << fmt_double(v) << "\n";
}

void write_haar_csv(std::ostream& out, const HaarCoefficients& c) {
  out << "index,value,parent_index\n";
  for (int i = 0; i < static_cast<int>(c.values.size()); ++i) {
    int parent = c.tree.parent[i];
    out << (i + 1) << "," << fmt_double(c.values[i]) << "," << (parent + 1) << "\n";
  }
}

void write_frontier_csv(std::ostream& out, const ParetoFrontier& f) {
  out << "G,f_of_G,on_hull,lambda_attaining,group_indices\n";
  for (const auto& p : f.points) {
    out << p.budget << "," << fmt_double(p.value) << "," << (p.on_hull ? "true" : "false") << ",";
    if (p.lambda) out << fmt_double(*p.lambda);
    out << ",";
    auto ids = p.selection.group_indices();
    for (std::size_t t = 0; t < ids.size(); ++t) {
      if (t) out << ";";
      out << (ids[t] + 1);
    }
    out << "\n";
  }
}

}  // namespace groupsel::io
