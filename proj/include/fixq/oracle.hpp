#pragma once

// Brute-force lower bound for qubit ensembles, independent of the analytic
// and geometric solvers. Each outcome gets a pair of orthogonal rank-one
// elements along a searched Bloch direction; for fixed directions the best
// weights come from a small linear program (completeness plus the Q equation).
// The grid result is then polished by column generation on the same LP.

#include "fixq/certifier.hpp"
#include "fixq/ensemble.hpp"

#include <cstdint>
#include <string>

namespace fixq {

struct SearchConfig {
  int resolution = 128;  // grid steps per half turn of a great circle
  int refinement = 40;   // column-generation rounds after the grid stage
  std::uint64_t seed = 1;
  int random_starts = 4;  // extra starts at the coarsest level

  /// Throws kValidation for resolution < 8 or negative counts.
  void validate() const;
};

struct OracleResult {
  double pc_lower = 0.0;
  Povm best;
  std::string source;  // which candidate family produced the bound
};

/// Levels run at resolutions 8, 16, ... up to cfg.resolution and the best
/// point is carried forward, so a finer grid never lowers the bound.
OracleResult brute_force(const Ensemble& e, double q, const SearchConfig& cfg = {});

struct LpResult {
  bool feasible = false;
  double value = 0.0;
  Eigen::VectorXd x;
  Eigen::VectorXd dual;  // y with A^T y >= c at the optimum
};

/// max c.x subject to A x = b, x >= 0 (two-phase dense simplex, Bland's rule).
LpResult solve_lp(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, const Eigen::VectorXd& c);

}  // namespace fixq
