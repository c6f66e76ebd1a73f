#pragma once

// Feasibility of measurements, the three outcome rates, and the dual
// optimality test for a candidate (POVM, Z, a).

#include "fixq/ensemble.hpp"

#include <string>
#include <vector>

namespace fixq {

struct Povm {
  Matrix pi0;               // inconclusive outcome
  std::vector<Matrix> pis;  // one per state, zero allowed

  int dim() const { return static_cast<int>(pi0.rows()); }
  /// Indices j with a nonzero guessing operator.
  std::vector<int> active(double tol = 1e-10) const;
};

struct DualCertificate {
  Matrix z;
  double a = 0.0;
};

struct Rates {
  double q = 0.0;
  double pc = 0.0;
  double pe = 0.0;
};

struct Scorecard {
  double q = 0.0;
  double pc = 0.0;
  double pe = 0.0;
  double dual_value = 0.0;
  // Entry 0 refers to the inconclusive outcome, entry j to state j.
  std::vector<double> complementarity_residuals;
  std::vector<double> psd_margins;
  double q_error = 0.0;
  bool optimal = false;
  std::string diagnostic;  // first violated condition when not optimal
};

inline constexpr double kFeasibilityTol = 1e-10;
inline constexpr double kCertifyTol = 1e-8;

/// Throws kFeasibility naming the violated constraint, kDimension on shape mismatch.
void check_feasible(const Povm& m, int dim, int n_states, double tol = kFeasibilityTol);

Rates measure_rates(const Ensemble& e, const Povm& m, double tol = kFeasibilityTol);

/// Optimal iff Z - a rho and every Z - eta_j rho_j are PSD, each
/// complementarity product is small in Frobenius norm, the measured
/// inconclusive rate hits the target and the dual value matches Pc. An
/// infeasible POVM (at tolerance tol) is reported as not optimal.
Scorecard certify(const Ensemble& e, const Povm& m, const DualCertificate& cert, double q,
                  double tol = kCertifyTol);

struct PairwiseReport {
  double max_residual = 0.0;
  std::vector<int> checked;
  std::vector<int> skipped;  // Tr Z - eta_j <= 0
};

/// Minimum-error relation between the kernels of Z - eta_j rho_j for the
/// guessed states. Each Z - eta_j rho_j is replaced by its dominant rank-one
/// part scaled to Tr Z - eta_j, so a residual certifies the rank-one structure.
/// Qubits only.
PairwiseReport pairwise_relation_check(const Ensemble& e, const DualCertificate& cert,
                                       const std::vector<int>& guessed);
PairwiseReport pairwise_relation_check(const Ensemble& e, const DualCertificate& cert,
                                       const Povm& m);

}  // namespace fixq
