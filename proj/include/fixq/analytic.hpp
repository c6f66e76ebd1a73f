#pragma once

// Closed-form optimal measurements for the structured families: a uniformly
// mixed state against a pure qudit state, equal-prior equal-purity qubits,
// two-group partially symmetric qubits and the three mirror-symmetric states.

#include "fixq/solution.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace fixq {

struct UmixSolution {
  Solution solution;
  // At eta2 = 1/(d+1) and Q <= Q_u the second construction is also optimal.
  std::optional<Solution> alternate;
};

UmixSolution solve_umix(int d, double eta2, double q);

/// Z = (1+p)/(2N) I with the inconclusive operator on the top eigenvector of
/// rho. Returns nothing when priors or purities differ, or when no
/// nonnegative weights reproduce the identity.
std::optional<Solution> solve_equiprobable(const Ensemble& e, double q);

enum class WeightSplit {
  kSymmetric,  // equal weight on every state of a group
  kSparse,     // two states (even group size) or three (odd)
};

struct SymmetricInternals {
  Regime regime = Regime::kGuessedSubset;
  double z00 = 0, z11 = 0, a = 0;
  double A1 = 0, A2 = 0;
  double f0 = 1, f1 = 1;
  double F = 1;    // f1 / f0
  double F_u = 1;  // boundary of the one-group branch
  double C = 0, C_prime = 0;
  double d0 = 0, d1 = 0;
  double eta0 = 0, eta_cr = 0;  // mirror family only, NaN otherwise
  std::vector<double> alpha;
};

struct SymmetricSolution {
  Solution solution;
  SymmetricInternals internals;
};

/// Dispatch: both groups, first group only, second group only, large Q; any
/// configuration outside these windows goes to the general qubit solver.
SymmetricSolution solve_partially_symmetric(const PartialSymmetrySpec& spec, double q,
                                            WeightSplit split = WeightSplit::kSymmetric);

SymmetricSolution solve_mirror_symmetric(double b, double eta, double q,
                                         WeightSplit split = WeightSplit::kSymmetric);

/// Per-state weights for a group of n states carrying total weight `total`.
std::vector<double> split_weights(int n, double total, WeightSplit split);

/// Piecewise closed-form optimum over Q in [0, 1].
struct PiecewiseSolution {
  std::optional<double> q_cr;  // switch between both-group and one-group branches
  double q_u = 1.0;            // start of the large-Q branch
  std::vector<double> breakpoints;
  std::vector<Regime> branches;  // one more than breakpoints
  std::function<double(double)> value;
  double confidence = 0.0;  // slope of the final branch

  Regime regime_at(double q) const;
};

/// Equal priors and purities. The basis and group labels are normalized
/// internally so that r >= 1/2 and the first group has the smaller b.
PiecewiseSolution equiprobable_symmetric_curve(const PartialSymmetrySpec& spec);

/// Three mirror-symmetric pure states.
PiecewiseSolution mirror_curve(double b, double eta);

struct MirrorConstants {
  double r, C, C_prime, eta0, eta_cr, F_u, q_u;
};
MirrorConstants mirror_constants(double b, double eta);

/// Largest achievable confidence for a group of the partially symmetric family.
double group_confidence(double eta, double s, double p, double r);

/// Boundary F_u of the one-group branch for group parameters (s, p, x).
double one_group_Fu(double s, double p, double x, double r);

}  // namespace fixq
