#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mlsq/model.hpp"
#include "mlsq/rational.hpp"

namespace mlsq {

// Run configuration parsed from the sectioned text format:
//
//   [structure]
//   layer = -9 2 1          # g p w, one line per layer
//   layer = 9 2 1
//
//   [path]
//   exponents = 1 1
//
//   [sweep]
//   energies = 1 4          # explicit energy list
//   energy_grid = 0.25 16 64   # or lo hi count (linear)
//   epsilons = 1e-1 1e-6 13    # log-spaced schedule lo hi count
//   epsilon = 1e-4             # single realization scale
//   sigma = 1
//   multiplier = 2             # 1-based measuring layer
//   free_layers = 1 2          # 1-based, strengths scale with the free variable
//   bracket = 0.1 10
//   max_roots = 8
//   mu = 1.5                   # region query (classify)
//   nu = 3
//   use_limit = false          # bound: solve on the extrapolated matrix
//
//   [matrix]                   # optional: point-interaction matrix input
//   theta = 2
//   alpha = -5
//
// Numeric fields accept rationals ("3/2") so exponent comparisons stay exact.
// Unknown keys and sections are rejected.
struct RunConfig {
  StructureSpec structure;
  PathSpec path;
  bool path_given = false;  // false: exponents defaulted to all ones

  std::vector<double> energies;
  std::optional<std::vector<double>> epsilons;  // schedule
  double epsilon = 1e-4;
  Ratio sigma = Ratio(1);
  std::size_t multiplier = 0;  // 0-based after parsing
  std::vector<std::size_t> free_layers;
  double bracket_lo = 0.1;
  double bracket_hi = 10.0;
  std::size_t max_roots = 16;
  std::optional<double> mu;
  std::optional<double> nu;
  bool use_limit = false;
  std::optional<double> matrix_theta;
  std::optional<double> matrix_alpha;

  bool has_matrix() const { return matrix_theta.has_value() || matrix_alpha.has_value(); }
};

RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

// Canonical text form; parse(echo(c)) == c.
std::string echo_config(const RunConfig& config);

bool config_equal(const RunConfig& a, const RunConfig& b);

// Numeric literal accepted by config fields: integer, decimal, or "a/b".
Ratio parse_ratio(const std::string& token);

// Fixed-format double used in every emitted table so reruns are
// byte-identical.
std::string format_double(double v);

}  // namespace mlsq
