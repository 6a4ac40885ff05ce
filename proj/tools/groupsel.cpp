// groupsel: group-sparse model selection from the command line.
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "groupsel/convex.hpp"
#include "groupsel/errors.hpp"
#include "groupsel/exact.hpp"
#include "groupsel/experiment.hpp"
#include "groupsel/group_structure.hpp"
#include "groupsel/io.hpp"
#include "groupsel/relax.hpp"
#include "groupsel/signals.hpp"
#include "groupsel/simd_kernels.hpp"

namespace {

using namespace groupsel;

int exit_code_for(Errc c) {
  switch (c) {
    case Errc::not_loopless_pairwise:
    case Errc::instance_too_large:
    case Errc::budget_out_of_range:
      return 3;
    case Errc::numerical_failure:
    case Errc::fractional_solution:
    case Errc::non_convergence:
      return 4;
    default:
      return 2;
  }
}

void emit(const std::string& out_path, const std::string& text) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path);
  if (!out) fail(Errc::parse_error, "cannot write " + out_path);
  out << text;
}

std::vector<double> apply_threshold(std::vector<double> x, double threshold) {
  for (double& v : x)
    if (std::fabs(v) <= threshold) v = 0.0;
  return x;
}

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> grid;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      grid.push_back(std::stod(item));
    } catch (const std::exception&) {
      fail(Errc::parse_error, "bad lambda grid entry: " + item);
    }
  }
  if (grid.empty()) fail(Errc::parse_error, "empty lambda grid");
  return grid;
}

std::string join_one_based(const std::vector<int>& ids) {
  std::string out;
  for (std::size_t t = 0; t < ids.size(); ++t) {
    if (t) out += ";";
    out += std::to_string(ids[t] + 1);
  }
  return out;
}

int cmd_classify(const std::string& structure_path, const std::string& format,
                 const std::string& out_path) {
  GroupStructure s = io::read_structure_json(structure_path);
  StructureClass c = classify(s);
  TuCertificate cert = tu_certificate(s);
  std::string text;
  if (format == "json") {
    nlohmann::json doc;
    doc["class"] = c.describe();
    doc["certificate"] = tu_certificate_name(cert);
    text = doc.dump(2) + "\n";
  } else {
    text = c.describe() + std::string(", ") + tu_certificate_name(cert) + "\n";
  }
  emit(out_path, text);
  return 0;
}

int cmd_solve(const std::string& structure_path, const std::string& signal_path, int G,
              std::optional<int> K, const std::string& method, double threshold,
              const std::string& format, const std::string& out_path) {
  GroupStructure s = io::read_structure_json(structure_path);
  std::vector<double> x = apply_threshold(io::read_signal_csv(signal_path), threshold);
  if (static_cast<int>(x.size()) != s.ground_size)
    fail(Errc::dimension_mismatch, "signal length does not match ground size");
  std::vector<double> w = squared_weights(x);
  const double energy = kern::sum(w.data(), w.size());

  Selection sel;
  if (method == "dp") {
    if (G < 1) fail(Errc::budget_out_of_range, "--groups must be positive");
    sel = K ? solve_gwmc_dp(s, w, G, *K) : solve_wmc_dp(s, w, G);
  } else if (method == "greedy") {
    if (G < 1) fail(Errc::budget_out_of_range, "--groups must be positive");
    sel = greedy_wmc(s, w, G);
    if (K) {
      TopK tk = top_k_weight(sel.element_indices(), w, *K);
      sel.elements.assign(s.ground_size, 0);
      for (int i : tk.indices) sel.elements[i] = 1;
      sel.objective = tk.total;
    }
  } else if (method == "oracle") {
    if (G < 1) fail(Errc::budget_out_of_range, "--groups must be positive");
    sel = brute_force_wmc(s, w, G, K);
  } else if (method.rfind("lp:", 0) == 0) {
    double lambda = 0.0;
    try {
      lambda = std::stod(method.substr(3));
    } catch (const std::exception&) {
      fail(Errc::parse_error, "bad lambda in method " + method);
    }
    sel = solve_regularized(s, w, lambda);
  } else {
    fail(Errc::parse_error, "unknown method " + method);
  }

  const double error = std::max(0.0, energy - sel.objective);
  std::string text;
  if (format == "json") {
    nlohmann::json doc;
    auto groups = nlohmann::json::array();
    for (int j : sel.group_indices()) groups.push_back(j + 1);
    auto elems = nlohmann::json::array();
    for (int i : sel.element_indices()) elems.push_back(i + 1);
    doc["groups"] = groups;
    doc["elements"] = elems;
    doc["objective"] = sel.objective;
    doc["error"] = error;
    text = doc.dump(2) + "\n";
  } else {
    text = "groups,elements,objective,error\n" + join_one_based(sel.group_indices()) + "," +
           join_one_based(sel.element_indices()) + "," + io::fmt_double(sel.objective) + "," +
           io::fmt_double(error) + "\n";
  }
  emit(out_path, text);
  return 0;
}

int cmd_pareto(const std::string& structure_path, const std::string& signal_path, double threshold,
               const std::string& out_path) {
  GroupStructure s = io::read_structure_json(structure_path);
  std::vector<double> x = apply_threshold(io::read_signal_csv(signal_path), threshold);
  if (static_cast<int>(x.size()) != s.ground_size)
    fail(Errc::dimension_mismatch, "signal length does not match ground size");
  std::vector<double> w = squared_weights(x);

  StructureClass c = classify(s);
  ParetoFrontier f;
  if (c.tag == StructureTag::Hierarchical) {
    TreeModel t = *c.hierarchy;
    t.weights = w;  // node weights follow the ground-set layout
    f = pareto_frontier_tree(t);
  } else if (c.tag == StructureTag::LooplessPairwise) {
    f = pareto_frontier(s, w, WmcSolver::Dp);
  } else {
    f = pareto_frontier(s, w, WmcSolver::Oracle);
  }
  std::ostringstream out;
  io::write_frontier_csv(out, f);
  emit(out_path, out.str());
  return 0;
}

int cmd_haar_experiment(const HaarExperimentConfig& cfg, const std::string& out_path) {
  HaarExperimentResult res = run_haar_experiment(cfg);
  std::ostringstream out;
  out << "method,K,error,violations,lambda\n";
  for (const auto& row : res.rows) {
    out << row.method << "," << row.k << "," << io::fmt_double(row.error) << ","
        << row.violations << ",";
    if (row.lambda) out << io::fmt_double(*row.lambda);
    out << "\n";
  }
  emit(out_path, out.str());
  return 0;
}

int cmd_gen_signal(int n, int pieces, std::uint64_t seed, const std::string& out_path) {
  std::vector<double> x = gen_piecewise_constant(n, pieces, seed);
  if (out_path.empty()) {
    for (double v : x) std::cout << io::fmt_double(v) << "\n";
  } else {
    io::write_signal_csv(out_path, x);
  }
  return 0;
}

TreeModel random_tree(int n, std::mt19937_64& rng) {
  std::vector<int> parent(n, -1);
  for (int v = 1; v < n; ++v) parent[v] = static_cast<int>(rng() % v);
  return TreeModel::from_parents(std::move(parent), {});
}

int cmd_gen_structure(const std::string& kind, int n, std::uint64_t seed,
                      const std::string& out_path) {
  std::mt19937_64 rng(seed);
  GroupStructure s;
  if (kind == "hierarchy") {
    s = hierarchy_groups(random_tree(n, rng));
  } else if (kind == "parent-child") {
    s = parent_child_groups(random_tree(n, rng));
  } else if (kind == "loopless") {
    // Random forest over n groups; one shared element per edge plus one to
    // three private elements per group.
    std::vector<int> parent(n, -1);
    for (int j = 1; j < n; ++j) parent[j] = (rng() % 5 == 0) ? -1 : static_cast<int>(rng() % j);
    std::vector<std::vector<int>> groups(n);
    int next = 0;
    for (int j = 0; j < n; ++j) {
      int privates = 1 + static_cast<int>(rng() % 3);
      for (int t = 0; t < privates; ++t) groups[j].push_back(next++);
    }
    for (int j = 1; j < n; ++j) {
      if (parent[j] < 0) continue;
      groups[j].push_back(next);
      groups[parent[j]].push_back(next);
      ++next;
    }
    s = build_structure(next, std::move(groups));
  } else {
    fail(Errc::parse_error, "unknown structure kind " + kind);
  }
  if (out_path.empty()) {
    std::cout << io::structure_to_json(s);
  } else {
    io::write_structure_json(out_path, s);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Group-sparse model selection: exact solvers and relaxations"};
  app.require_subcommand(1);

  std::string structure_path, signal_path, out_path, method = "dp", format = "csv";
  std::string kind = "loopless", latent_grid_text, hier_grid_text;
  int G = 0, n = 64, pieces = 7;
  std::optional<int> K;
  double threshold = 0.0;
  std::uint64_t seed = 7;

  auto* c_classify = app.add_subcommand("classify", "Classify a structure and its TU certificate");
  c_classify->add_option("--structure", structure_path, "structure JSON")->required();
  c_classify->add_option("--format", format, "csv|json")
      ->check(CLI::IsMember({"csv", "json"}));
  c_classify->add_option("--out", out_path, "output path (default stdout)");

  auto* c_solve = app.add_subcommand("solve", "Solve the model-selection problem");
  c_solve->add_option("--structure", structure_path, "structure JSON")->required();
  c_solve->add_option("--signal", signal_path, "signal CSV")->required();
  c_solve->add_option("--groups", G, "group budget G");
  c_solve->add_option("--sparsity", K, "element budget K");
  c_solve->add_option("--method", method, "dp|greedy|oracle|lp:<lambda>");
  c_solve->add_option("--threshold", threshold, "zero out |x_i| <= threshold first");
  c_solve->add_option("--format", format, "csv|json")->check(CLI::IsMember({"csv", "json"}));
  c_solve->add_option("--out", out_path, "output path (default stdout)");

  auto* c_pareto = app.add_subcommand("pareto", "Frontier f(G) with hull and lambda analysis");
  c_pareto->add_option("--structure", structure_path, "structure JSON")->required();
  c_pareto->add_option("--signal", signal_path, "signal CSV")->required();
  c_pareto->add_option("--threshold", threshold, "zero out |x_i| <= threshold first");
  c_pareto->add_option("--out", out_path, "output path (default stdout)");

  auto* c_haar = app.add_subcommand("haar-experiment", "Wavelet-tree comparison experiment");
  c_haar->add_option("--seed", seed, "signal seed");
  c_haar->add_option("--n", n, "signal length (power of two)");
  c_haar->add_option("--pieces", pieces, "constant segments");
  c_haar->add_option("--latent-grid", latent_grid_text, "comma-separated lambdas");
  c_haar->add_option("--hier-grid", hier_grid_text, "comma-separated lambdas");
  c_haar->add_option("--out", out_path, "output path (default stdout)");

  auto* c_gen_signal = app.add_subcommand("gen-signal", "Piecewise-constant signal");
  c_gen_signal->add_option("--n", n, "length (power of two)");
  c_gen_signal->add_option("--pieces", pieces, "constant segments");
  c_gen_signal->add_option("--seed", seed, "seed");
  c_gen_signal->add_option("--out", out_path, "output path (default stdout)");

  auto* c_gen_structure = app.add_subcommand("gen-structure", "Random structure files");
  c_gen_structure->add_option("--kind", kind, "loopless|hierarchy|parent-child")
      ->check(CLI::IsMember({"loopless", "hierarchy", "parent-child"}));
  c_gen_structure->add_option("--n", n, "groups (loopless) or tree nodes");
  c_gen_structure->add_option("--seed", seed, "seed");
  c_gen_structure->add_option("--out", out_path, "output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (c_classify->parsed()) return cmd_classify(structure_path, format, out_path);
    if (c_solve->parsed())
      return cmd_solve(structure_path, signal_path, G, K, method, threshold, format, out_path);
    if (c_pareto->parsed()) return cmd_pareto(structure_path, signal_path, threshold, out_path);
    if (c_haar->parsed()) {
      HaarExperimentConfig cfg;
      cfg.n = n;
      cfg.pieces = pieces;
      cfg.seed = seed;
      if (!latent_grid_text.empty()) cfg.latent_grid = parse_grid(latent_grid_text);
      if (!hier_grid_text.empty()) cfg.hier_grid = parse_grid(hier_grid_text);
      return cmd_haar_experiment(cfg, out_path);
    }
    if (c_gen_signal->parsed()) return cmd_gen_signal(n, pieces, seed, out_path);
    if (c_gen_structure->parsed()) return cmd_gen_structure(kind, n, seed, out_path);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
