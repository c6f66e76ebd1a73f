#include "fixq/operators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

namespace fixq {

double hermiticity_defect(const Matrix& a) {
  if (a.rows() != a.cols()) return std::numeric_limits<double>::infinity();
  double worst = 0.0;
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = i; j < a.cols(); ++j)
      worst = std::max(worst, std::abs(a(i, j) - std::conj(a(j, i))));
  return worst;
}

void require_hermitian(const Matrix& a, const char* what) {
  if (a.rows() != a.cols() || a.rows() == 0) {
    std::ostringstream os;
    os << what << ": expected a nonempty square matrix, got " << a.rows() << "x" << a.cols();
    throw Error(ErrorKind::kDimension, os.str());
  }
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  const double defect = hermiticity_defect(a);
  if (defect > kHermitianTol * scale) {
    std::ostringstream os;
    os << what << ": not Hermitian, max |A_ij - conj(A_ji)| = " << defect;
    throw Error(ErrorKind::kSymmetry, os.str());
  }
}

void fix_phase(Vector& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double mag = std::abs(v(i));
    if (mag > 1e-14) {
      v *= std::conj(v(i)) / mag;
      v(i) = Complex(mag, 0.0);
      return;
    }
  }
}

namespace {

EigenDecomposition eig2(const Matrix& m) {
  const double a = m(0, 0).real();
  const double b = m(1, 1).real();
  const Complex c = 0.5 * (m(0, 1) + std::conj(m(1, 0)));
  const double mean = 0.5 * (a + b);
  const double half = std::hypot(0.5 * (a - b), std::abs(c));

  EigenDecomposition out;
  out.values.resize(2);
  out.values << mean - half, mean + half;
  out.vectors.resize(2, 2);

  const double lo = out.values(0);
  Vector u(2), w(2);
  u << c, Complex(lo - a, 0.0);
  w << Complex(lo - b, 0.0), std::conj(c);
  Vector v0 = u.norm() >= w.norm() ? u : w;
  const double n0 = v0.norm();
  if (n0 < 1e-300) {
    // Degenerate spectrum: keep the computational basis.
    out.vectors.setIdentity();
    return out;
  }
  v0 /= n0;
  fix_phase(v0);
  Vector v1(2);
  v1 << -std::conj(v0(1)), std::conj(v0(0));
  fix_phase(v1);
  out.vectors.col(0) = v0;
  out.vectors.col(1) = v1;
  return out;
}

}  // namespace

EigenDecomposition eig_hermitian(const Matrix& a) {
  require_hermitian(a, "eig_hermitian");
  if (a.rows() == 1) {
    EigenDecomposition out;
    out.values = Eigen::VectorXd::Constant(1, a(0, 0).real());
    out.vectors = Matrix::Identity(1, 1);
    return out;
  }
  if (a.rows() == 2) return eig2(a);

  const Matrix sym = 0.5 * (a + a.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sym);
  if (solver.info() != Eigen::Success)
    throw Error(ErrorKind::kInternal, "eig_hermitian: eigensolver did not converge");
  EigenDecomposition out{solver.eigenvalues(), solver.eigenvectors()};
  for (Eigen::Index k = 0; k < out.vectors.cols(); ++k) {
    Vector col = out.vectors.col(k);
    fix_phase(col);
    out.vectors.col(k) = col;
  }
  return out;
}

double min_eigenvalue(const Matrix& a) { return eig_hermitian(a).values(0); }

double max_eigenvalue(const Matrix& a) {
  const auto e = eig_hermitian(a);
  return e.values(e.values.size() - 1);
}

bool is_psd(const Matrix& a, double tol) { return min_eigenvalue(a) >= -tol; }

Vector zero_eigenvector(const Matrix& a, double tol) {
  const auto e = eig_hermitian(a);
  if (e.values(0) > tol) {
    std::ostringstream os;
    os << "no kernel: smallest eigenvalue " << e.values(0) << " exceeds tolerance " << tol;
    throw Error(ErrorKind::kNoKernel, os.str());
  }
  Vector v = e.vectors.col(0);
  fix_phase(v);
  return v;
}

Matrix projector(const Vector& v) { return v * v.adjoint(); }

Matrix psd_power(const Matrix& a, double p, double floor) {
  const auto e = eig_hermitian(a);
  Eigen::VectorXd lam(e.values.size());
  for (Eigen::Index i = 0; i < lam.size(); ++i)
    lam(i) = e.values(i) > floor ? std::pow(e.values(i), p) : 0.0;
  return e.vectors * lam.cast<Complex>().asDiagonal() * e.vectors.adjoint();
}

double real_trace(const Matrix& a) { return a.trace().real(); }

double trace_product(const Matrix& a, const Matrix& b) {
  return (a.array() * b.transpose().array()).sum().real();
}

BlochForm bloch_form(const Matrix& h) {
  BlochForm f;
  f.trace = (h(0, 0) + h(1, 1)).real();
  f.vec = Eigen::Vector3d(2.0 * h(0, 1).real(), -2.0 * h(0, 1).imag(),
                          (h(0, 0) - h(1, 1)).real());
  return f;
}

Matrix from_bloch(double trace, const Eigen::Vector3d& v) {
  Matrix h(2, 2);
  h(0, 0) = 0.5 * (trace + v.z());
  h(1, 1) = 0.5 * (trace - v.z());
  h(0, 1) = 0.5 * Complex(v.x(), -v.y());
  h(1, 0) = std::conj(h(0, 1));
  return h;
}

Vector ket_from_bloch(const Eigen::Vector3d& n) {
  const double len = n.norm();
  const double z = len > 0 ? std::clamp(n.z() / len, -1.0, 1.0) : 1.0;
  const double theta = std::acos(z);
  const double phi = std::atan2(n.y(), n.x());
  Vector k(2);
  k << std::cos(0.5 * theta), std::polar(std::sin(0.5 * theta), phi);
  return k;
}

NnlsResult nnls(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, int max_iterations) {
  const Eigen::Index n = a.cols();
  if (max_iterations <= 0) max_iterations = static_cast<int>(3 * n + 10);
  const double tol =
      10.0 * std::numeric_limits<double>::epsilon() * std::max<double>(1.0, a.norm()) *
      static_cast<double>(std::max(a.rows(), n));

  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  std::vector<bool> passive(static_cast<std::size_t>(n), false);

  auto solve_passive = [&](Eigen::VectorXd& s) {
    std::vector<Eigen::Index> idx;
    for (Eigen::Index j = 0; j < n; ++j)
      if (passive[static_cast<std::size_t>(j)]) idx.push_back(j);
    s = Eigen::VectorXd::Zero(n);
    if (idx.empty()) return;
    Eigen::MatrixXd sub(a.rows(), static_cast<Eigen::Index>(idx.size()));
    for (std::size_t k = 0; k < idx.size(); ++k) sub.col(static_cast<Eigen::Index>(k)) = a.col(idx[k]);
    const Eigen::VectorXd z = sub.completeOrthogonalDecomposition().solve(b);
    for (std::size_t k = 0; k < idx.size(); ++k) s(idx[k]) = z(static_cast<Eigen::Index>(k));
  };

  Eigen::VectorXd w = a.transpose() * (b - a * x);
  for (int outer = 0; outer < max_iterations; ++outer) {
    Eigen::Index t = -1;
    double best = tol;
    for (Eigen::Index j = 0; j < n; ++j)
      if (!passive[static_cast<std::size_t>(j)] && w(j) > best) {
        best = w(j);
        t = j;
      }
    if (t < 0) break;
    passive[static_cast<std::size_t>(t)] = true;

    Eigen::VectorXd s;
    solve_passive(s);
    for (int inner = 0; inner < max_iterations; ++inner) {
      double alpha = 2.0;
      for (Eigen::Index j = 0; j < n; ++j)
        if (passive[static_cast<std::size_t>(j)] && s(j) <= 0.0)
          alpha = std::min(alpha, x(j) / (x(j) - s(j)));
      if (alpha > 1.0) break;
      x += alpha * (s - x);
      for (Eigen::Index j = 0; j < n; ++j)
        if (passive[static_cast<std::size_t>(j)] && x(j) <= tol) {
          passive[static_cast<std::size_t>(j)] = false;
          x(j) = 0.0;
        }
      solve_passive(s);
    }
    x = s;
    w = a.transpose() * (b - a * x);
  }
  x = x.cwiseMax(0.0);
  return {x, (a * x - b).norm()};
}

}  // namespace fixq
