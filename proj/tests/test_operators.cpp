#include "fixq/operators.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace fixq;

namespace {

Matrix diag(double x, double y) {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = x;
  m(1, 1) = y;
  return m;
}

Matrix random_hermitian(std::mt19937_64& rng, int d) {
  std::normal_distribution<double> g;
  Matrix a(d, d);
  for (int i = 0; i < d; ++i)
    for (int k = 0; k < d; ++k) a(i, k) = Complex(g(rng), g(rng));
  return 0.5 * (a + a.adjoint());
}

}  // namespace

TEST_CASE("eigenvalues of simple Hermitian matrices") {
  auto id = eig_hermitian(Matrix::Identity(2, 2));
  CHECK(id.values(0) == doctest::Approx(1.0));
  CHECK(id.values(1) == doctest::Approx(1.0));

  auto dg = eig_hermitian(diag(0.3, 0.7));
  CHECK(dg.values(0) == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(dg.values(1) == doctest::Approx(0.7).epsilon(1e-15));
  CHECK(std::abs(dg.vectors(0, 0)) == doctest::Approx(1.0));
  CHECK(std::abs(dg.vectors(1, 1)) == doctest::Approx(1.0));

  Matrix x(2, 2);
  x << 0, 1, 1, 0;
  auto px = eig_hermitian(x);
  CHECK(px.values(0) == doctest::Approx(-1.0));
  CHECK(px.values(1) == doctest::Approx(1.0));
}

TEST_CASE("eigendecomposition reconstructs and is orthonormal") {
  std::mt19937_64 rng(7);
  for (int d : {2, 3, 5}) {
    for (int t = 0; t < 20; ++t) {
      const Matrix a = random_hermitian(rng, d);
      const auto e = eig_hermitian(a);
      const Matrix back = e.vectors * e.values.cast<Complex>().asDiagonal() * e.vectors.adjoint();
      CHECK((back - a).norm() <= 1e-10 * std::max(1.0, a.norm()));
      CHECK((e.vectors.adjoint() * e.vectors - Matrix::Identity(d, d)).norm() <= 1e-10);
      for (int i = 1; i < d; ++i) CHECK(e.values(i - 1) <= e.values(i));
    }
  }
}

TEST_CASE("eigenvector phase is fixed") {
  std::mt19937_64 rng(11);
  const auto e = eig_hermitian(random_hermitian(rng, 2));
  for (int k = 0; k < 2; ++k) {
    const Complex first = std::abs(e.vectors(0, k)) > 1e-14 ? e.vectors(0, k) : e.vectors(1, k);
    CHECK(std::abs(first.imag()) < 1e-14);
    CHECK(first.real() > 0.0);
  }
}

TEST_CASE("PSD test honors its tolerance band") {
  CHECK(is_psd(Matrix::Identity(2, 2), 1e-10));
  CHECK_FALSE(is_psd(diag(1, -0.5), 1e-10));
  CHECK(is_psd(diag(1, -1e-12), 1e-10));
}

TEST_CASE("kernel vectors") {
  Vector v = zero_eigenvector(diag(0, 1));
  CHECK(std::abs(v(0)) == doctest::Approx(1.0));
  v = zero_eigenvector(diag(1, 0));
  CHECK(std::abs(v(1)) == doctest::Approx(1.0));

  Vector plus(2);
  plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  v = zero_eigenvector(projector(plus));
  CHECK(v(0).real() == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(v(1).real() == doctest::Approx(-1.0 / std::sqrt(2.0)));

  CHECK_THROWS_AS(zero_eigenvector(Matrix::Identity(2, 2)), Error);
}

TEST_CASE("Hermitian check rejects asymmetric input") {
  Matrix a(2, 2);
  a << 1, Complex(0, 1), Complex(0, 1), 1;
  try {
    require_hermitian(a);
    FAIL("expected a symmetry error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kSymmetry);
  }
}

TEST_CASE("Bloch round trip") {
  const Eigen::Vector3d v(0.1, -0.4, 0.3);
  const Matrix h = from_bloch(0.8, v);
  const auto b = bloch_form(h);
  CHECK(b.trace == doctest::Approx(0.8));
  CHECK((b.vec - v).norm() < 1e-15);

  const Eigen::Vector3d n = Eigen::Vector3d(1, 2, -2).normalized();
  const Vector k = ket_from_bloch(n);
  CHECK((bloch_form(projector(k)).vec - n).norm() < 1e-14);
}

TEST_CASE("matrix powers of PSD operators") {
  const Matrix a = diag(4.0, 0.0);
  const Matrix inv_sqrt = psd_power(a, -0.5);
  CHECK(inv_sqrt(0, 0).real() == doctest::Approx(0.5));
  CHECK(std::abs(inv_sqrt(1, 1)) < 1e-15);
  CHECK(psd_power(diag(9, 16), 0.5)(1, 1).real() == doctest::Approx(4.0));
}

TEST_CASE("nonnegative least squares") {
  Eigen::MatrixXd a(3, 2);
  a << 1, 0, 0, 1, 1, 1;
  Eigen::VectorXd b(3);
  b << 1, -1, 0;
  const auto r = nnls(a, b);
  CHECK(r.x.minCoeff() >= 0.0);
  CHECK(r.x(1) == doctest::Approx(0.0));
  CHECK(r.x(0) == doctest::Approx(0.5));

  b << 2, 3, 5;
  const auto exact = nnls(a, b);
  CHECK(exact.residual < 1e-12);
  CHECK(exact.x(0) == doctest::Approx(2.0));
  CHECK(exact.x(1) == doctest::Approx(3.0));
}
