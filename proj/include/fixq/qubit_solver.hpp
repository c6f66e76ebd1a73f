#pragma once

// General fixed-rate solver for qubit ensembles. Works in the eigenbasis of
// the average state, where a dual operator Z = (T I + w.sigma)/2 must touch
// each guessed weighted state and, when Q > 0, the scaled average a rho.

#include "fixq/solution.hpp"

#include <optional>
#include <vector>

namespace fixq {

/// Largest a with Z - a diag(r, 1-r) >= 0, i.e. the root that makes that
/// difference singular.
double a_from_Z(double z00, double z11, double re_z10, double im_z10, double r);

struct SolverCase {
  std::vector<int> subset;  // guessed states
  double z00 = 0, z11 = 0, re_z10 = 0, im_z10 = 0;
  double a = 0;
  std::vector<double> weights;  // per guessed state
  double pi0_weight = 0;
  Vector pi0_direction;  // empty when Q = 0
  Povm povm;             // solver basis
  DualCertificate certificate;
  double pc = 0;
};

struct QubitSolverOptions {
  double tol = kCertifyTol;
  int a_grid = 512;           // bracket grid for the one-parameter cases
  bool shortcuts = true;      // large-Q witness and equal-prior closed form
};

// The case solvers expect an ensemble already expressed in the eigenbasis of
// its average state (largest eigenvalue first). Each returns the first
// candidate that certifies, or nothing.
std::optional<SolverCase> solve_case_M1(const Ensemble& e, double q, int j,
                                        const QubitSolverOptions& opt = {});
std::optional<SolverCase> solve_case_M2(const Ensemble& e, double q,
                                        const std::vector<int>& subset,
                                        const QubitSolverOptions& opt = {});
std::optional<SolverCase> solve_case_M3(const Ensemble& e, double q,
                                        const std::vector<int>& subset,
                                        const QubitSolverOptions& opt = {});
std::optional<SolverCase> solve_case_M4(const Ensemble& e, double q,
                                        const std::vector<int>& subset,
                                        const QubitSolverOptions& opt = {});

/// Certified optimum for any qubit ensemble at inconclusive rate q, in the
/// input basis. Candidates are tried with fewer guessed states first, then
/// lexicographically; throws kInternal if none certifies.
Solution solve_qubit(const Ensemble& e, double q, const QubitSolverOptions& opt = {});

}  // namespace fixq
