#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "groupsel/relax.hpp"
#include "groupsel/signals.hpp"

namespace groupsel {

// The wavelet-tree comparison: exact DP frontier over K against the two
// convex baselines with support refitting.
struct HaarExperimentConfig {
  int n = 64;
  int pieces = 7;
  std::uint64_t seed = 7;  // default stand-in: 25-sparse hierarchical Haar support
  std::vector<double> latent_grid;  // empty -> built-in grid
  std::vector<double> hier_grid;    // empty -> built-in grid
};

struct ExperimentRow {
  std::string method;  // "dp", "hierarchical_gl", "latent_gl"
  int k = 0;           // solution sparsity
  double error = 0.0;  // squared error of the refitted approximation
  int violations = 0;  // hierarchy violations of the support
  std::optional<double> lambda;
};

struct HaarExperimentResult {
  std::vector<double> signal;
  HaarCoefficients coeffs;
  ParetoFrontier dp_frontier;  // over K, in coefficient space
  std::vector<ExperimentRow> rows;
};

std::vector<double> default_lambda_grid();

HaarExperimentResult run_haar_experiment(const HaarExperimentConfig& cfg);

}  // namespace groupsel
