#pragma once

// Small dense complex-Hermitian linear algebra shared by every solver.

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>

namespace fixq {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Absolute tolerance for PSD and kernel tests. All quantities are O(1).
inline constexpr double kDefaultTol = 1e-9;
/// Assembly tolerance for the Hermitian symmetry check.
inline constexpr double kHermitianTol = 1e-12;

enum class ErrorKind {
  kValidation,
  kSymmetry,
  kNoKernel,
  kDimension,
  kSingular,
  kFeasibility,
  kUnsupported,
  kIo,
  kInternal,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

struct EigenDecomposition {
  Eigen::VectorXd values;  // ascending
  Matrix vectors;          // orthonormal columns, phase-fixed
};

/// max |A_ij - conj(A_ji)|.
double hermiticity_defect(const Matrix& a);

/// Throws ErrorKind::kSymmetry when `a` is not square-Hermitian within kHermitianTol
/// (scaled by max(1, |A|_max)).
void require_hermitian(const Matrix& a, const char* what = "matrix");

/// Hermitian eigensolver. d = 2 uses the closed-form quadratic; larger
/// dimensions go through Eigen's self-adjoint solver. Eigenvector phases
/// are fixed so the first nonzero component is real positive.
EigenDecomposition eig_hermitian(const Matrix& a);

double min_eigenvalue(const Matrix& a);
double max_eigenvalue(const Matrix& a);

bool is_psd(const Matrix& a, double tol = kDefaultTol);

/// Normalized eigenvector of the smallest eigenvalue. Throws kNoKernel if
/// that eigenvalue exceeds `tol`.
Vector zero_eigenvector(const Matrix& a, double tol = kDefaultTol);

/// Rotates `v` so that its first component with magnitude above 1e-14 is
/// real and positive.
void fix_phase(Vector& v);

Matrix projector(const Vector& v);

/// A^p for PSD A via the spectral decomposition; eigenvalues below
/// `floor` are treated as zero (and left zero for negative p).
Matrix psd_power(const Matrix& a, double p, double floor = 1e-14);

double real_trace(const Matrix& a);

/// Re Tr(A B) for Hermitian A, B.
double trace_product(const Matrix& a, const Matrix& b);

// Qubit Bloch helpers: H = (t I + v . sigma) / 2.
struct BlochForm {
  double trace;
  Eigen::Vector3d vec;
};
BlochForm bloch_form(const Matrix& h);
Matrix from_bloch(double trace, const Eigen::Vector3d& v);
/// Unit ket whose Bloch vector is `n` (|n| = 1).
Vector ket_from_bloch(const Eigen::Vector3d& n);

struct NnlsResult {
  Eigen::VectorXd x;
  double residual;  // ||A x - b||_2
};

/// Lawson-Hanson non-negative least squares, min ||A x - b|| s.t. x >= 0.
NnlsResult nnls(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                int max_iterations = 0);

}  // namespace fixq
