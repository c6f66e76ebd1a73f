#pragma once

// Problem instances: weighted density operators plus constructors for the
// structured qubit families the analytic solvers understand.

#include "fixq/operators.hpp"

#include <optional>
#include <string>
#include <vector>

namespace fixq {

struct WeightedState {
  double prior;
  Matrix rho;
};

class Ensemble {
 public:
  Ensemble() = default;
  /// Validates priors (each in (0,1], summing to 1 within 1e-12) and states
  /// (Hermitian, PSD and unit trace within 1e-10). Inputs are never projected.
  explicit Ensemble(std::vector<WeightedState> states);

  int dim() const { return dim_; }
  int size() const { return static_cast<int>(states_.size()); }
  double prior(int j) const { return states_[static_cast<std::size_t>(j)].prior; }
  const Matrix& state(int j) const { return states_[static_cast<std::size_t>(j)].rho; }
  const std::vector<WeightedState>& states() const { return states_; }
  /// eta_j * rho_j
  Matrix weighted(int j) const { return prior(j) * state(j); }
  const Matrix& average() const { return average_; }

  /// Same priors, every state conjugated as W^dag rho_j W.
  Ensemble rotated(const Matrix& w) const;

 private:
  int dim_ = 0;
  std::vector<WeightedState> states_;
  Matrix average_;
};

Matrix average_state(const Ensemble& e);

/// rho = p |psi><psi| + (1-p)/2 I with |psi> along the unit Bloch direction n.
Matrix qubit_state(double purity, const Eigen::Vector3d& direction);
Matrix qubit_state(double purity, double theta, double phi);

enum class SymmetryCase { kTwoGroups, kAxisState, kSingleGroup };

struct PartialSymmetrySpec {
  int n1 = 2;
  int n2 = 0;
  double b = 0.5;
  double c = 1.0;
  double p = 1.0;
  double p_prime = 1.0;
  double eta = 0.5;
  double eta_prime = 0.0;
  double delta = 0.0;  // phase offset of the second group

  /// Throws kValidation naming the offending field.
  void validate() const;
  SymmetryCase symmetry_case() const;
  double s() const { return p * b + 0.5 * (1.0 - p); }
  double s_prime() const { return p_prime * c + 0.5 * (1.0 - p_prime); }
  /// <0|rho|0>
  double r() const { return n1 * eta * s() + n2 * eta_prime * s_prime(); }
  int n() const { return n1 + n2; }
  bool equiprobable() const;
};

Ensemble build_partially_symmetric(const PartialSymmetrySpec& spec);

/// Symmetric pair sqrt(b)|0> +- sqrt(1-b)|1> with prior eta each, plus |0> with 1 - 2 eta.
PartialSymmetrySpec mirror_spec(double b, double eta);
Ensemble build_mirror(double b, double eta);

/// Uniformly mixed I/d with prior 1 - eta2 against the pure |0> with prior eta2.
Ensemble build_umix(int d, double eta2);

bool symmetry_check(const Ensemble& e, const PartialSymmetrySpec& spec, double tol = 1e-10);

/// Unitary W whose columns are eigenvectors of rho, first column for the
/// largest eigenvalue. Degenerate rho keeps the computational basis.
struct RhoEigenbasis {
  Matrix to_input;  // W: solver basis -> input basis
  Eigen::VectorXd eigenvalues;  // descending
  bool degenerate = false;
};
RhoEigenbasis rho_eigenbasis(const Matrix& rho, double degeneracy_tol = 1e-12);

}  // namespace fixq
