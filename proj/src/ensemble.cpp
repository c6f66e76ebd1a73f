#include "fixq/ensemble.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace fixq {

namespace {

[[noreturn]] void invalid(const std::string& msg) { throw Error(ErrorKind::kValidation, msg); }

Matrix accumulate(const std::vector<WeightedState>& states, int dim) {
  Matrix avg = Matrix::Zero(dim, dim);
  for (const auto& s : states) avg += s.prior * s.rho;
  return 0.5 * (avg + avg.adjoint());
}

}  // namespace

Ensemble::Ensemble(std::vector<WeightedState> states) : states_(std::move(states)) {
  if (states_.empty()) invalid("ensemble: at least one state is required");
  dim_ = static_cast<int>(states_.front().rho.rows());
  double total = 0.0;
  for (std::size_t j = 0; j < states_.size(); ++j) {
    const auto& s = states_[j];
    std::ostringstream tag;
    tag << "states[" << j << "]";
    if (s.rho.rows() != dim_ || s.rho.cols() != dim_)
      throw Error(ErrorKind::kDimension, tag.str() + ": dimension differs from the first state");
    if (!(s.prior > 0.0 && s.prior <= 1.0)) invalid(tag.str() + ".prior: must lie in (0, 1]");
    require_hermitian(s.rho, tag.str().c_str());
    const double tr = real_trace(s.rho);
    if (std::abs(tr - 1.0) > 1e-10) {
      std::ostringstream os;
      os << tag.str() << ": trace " << tr << " differs from 1";
      invalid(os.str());
    }
    const double lo = min_eigenvalue(s.rho);
    if (lo < -1e-10) {
      std::ostringstream os;
      os << tag.str() << ": not positive semidefinite, smallest eigenvalue " << lo;
      invalid(os.str());
    }
    total += s.prior;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    std::ostringstream os;
    os << "priors: sum to " << total << " instead of 1";
    invalid(os.str());
  }
  average_ = accumulate(states_, dim_);
}

Ensemble Ensemble::rotated(const Matrix& w) const {
  std::vector<WeightedState> out;
  out.reserve(states_.size());
  for (const auto& s : states_) {
    Matrix r = w.adjoint() * s.rho * w;
    out.push_back({s.prior, 0.5 * (r + r.adjoint())});
  }
  return Ensemble(std::move(out));
}

Matrix average_state(const Ensemble& e) { return e.average(); }

Matrix qubit_state(double purity, const Eigen::Vector3d& direction) {
  if (!(purity >= 0.0 && purity <= 1.0)) invalid("purity: must lie in [0, 1]");
  const double len = direction.norm();
  if (std::abs(len - 1.0) > 1e-10) invalid("bloch direction: must be a unit vector");
  return from_bloch(1.0, purity * direction / len);
}

Matrix qubit_state(double purity, double theta, double phi) {
  const Eigen::Vector3d n(std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi),
                          std::cos(theta));
  return qubit_state(purity, n);
}

void PartialSymmetrySpec::validate() const {
  if (n1 < 2) invalid("n1: first group needs at least 2 states");
  if (n2 < 0) invalid("n2: must be nonnegative");
  if (!(b > 0.0 && b < 1.0)) invalid("b: must lie in (0, 1)");
  if (!(p >= 0.0 && p <= 1.0)) invalid("p: must lie in [0, 1]");
  if (!(eta > 0.0 && eta <= 1.0)) invalid("eta: must lie in (0, 1]");
  if (n2 > 0) {
    if (!(c > b && c <= 1.0)) invalid("c: must satisfy b < c <= 1");
    if (!(p_prime >= 0.0 && p_prime <= 1.0)) invalid("p_prime: must lie in [0, 1]");
    if (!(eta_prime > 0.0 && eta_prime <= 1.0)) invalid("eta_prime: must lie in (0, 1]");
    if (n2 == 1 && std::abs(c - 1.0) > 1e-12)
      invalid("c: a single second-group state must sit on the axis (c = 1)");
  }
  const double total = n1 * eta + n2 * eta_prime;
  if (std::abs(total - 1.0) > 1e-12) {
    std::ostringstream os;
    os << "eta, eta_prime: n1*eta + n2*eta_prime = " << total << " instead of 1";
    invalid(os.str());
  }
}

SymmetryCase PartialSymmetrySpec::symmetry_case() const {
  if (n2 == 0) return SymmetryCase::kSingleGroup;
  if (n2 == 1) return SymmetryCase::kAxisState;
  return SymmetryCase::kTwoGroups;
}

bool PartialSymmetrySpec::equiprobable() const {
  return n2 == 0 || (std::abs(eta - eta_prime) <= 1e-12 && std::abs(p - p_prime) <= 1e-12);
}

Ensemble build_partially_symmetric(const PartialSymmetrySpec& spec) {
  spec.validate();
  const double two_pi = 2.0 * std::numbers::pi;
  auto pure = [](double pop0, double phase, double purity) {
    Vector psi(2);
    psi << std::sqrt(pop0), std::polar(std::sqrt(1.0 - pop0), phase);
    Matrix rho = purity * projector(psi) + 0.5 * (1.0 - purity) * Matrix::Identity(2, 2);
    return Matrix(0.5 * (rho + rho.adjoint()));
  };
  std::vector<WeightedState> states;
  for (int j = 0; j < spec.n1; ++j)
    states.push_back({spec.eta, pure(spec.b, two_pi * j / spec.n1, spec.p)});
  for (int j = 0; j < spec.n2; ++j)
    states.push_back(
        {spec.eta_prime, pure(spec.c, spec.delta + two_pi * j / spec.n2, spec.p_prime)});
  return Ensemble(std::move(states));
}

PartialSymmetrySpec mirror_spec(double b, double eta) {
  if (!(eta > 0.0 && eta < 0.5)) invalid("eta: must lie in (0, 1/2)");
  PartialSymmetrySpec s;
  s.n1 = 2;
  s.n2 = 1;
  s.b = b;
  s.c = 1.0;
  s.p = s.p_prime = 1.0;
  s.eta = eta;
  s.eta_prime = 1.0 - 2.0 * eta;
  s.validate();
  return s;
}

Ensemble build_mirror(double b, double eta) { return build_partially_symmetric(mirror_spec(b, eta)); }

Ensemble build_umix(int d, double eta2) {
  if (d < 2) invalid("d: must be at least 2");
  if (!(eta2 > 0.0 && eta2 < 1.0)) invalid("eta2: must lie in (0, 1)");
  Matrix pure = Matrix::Zero(d, d);
  pure(0, 0) = 1.0;
  return Ensemble({{1.0 - eta2, Matrix::Identity(d, d) / static_cast<double>(d)}, {eta2, pure}});
}

bool symmetry_check(const Ensemble& e, const PartialSymmetrySpec& spec, double tol) {
  if (e.dim() != 2 || e.size() != spec.n())
    throw Error(ErrorKind::kDimension, "symmetry_check: ensemble does not match the symmetry parameters");
  auto rotation = [](int n) {
    Matrix u = Matrix::Identity(2, 2);
    if (n > 0) u(1, 1) = std::polar(1.0, 2.0 * std::numbers::pi / n);
    return u;
  };
  auto check_group = [&](int first, int count, const Matrix& u) {
    Matrix power = Matrix::Identity(2, 2);
    for (int k = 0; k < count; ++k) {
      const Matrix expected = power * e.state(first) * power.adjoint();
      if ((expected - e.state(first + k)).cwiseAbs().maxCoeff() > tol) return false;
      power = u * power;
    }
    return true;
  };
  if (!check_group(0, spec.n1, rotation(spec.n1))) return false;
  if (spec.n2 >= 2 && !check_group(spec.n1, spec.n2, rotation(spec.n2))) return false;
  return true;
}

RhoEigenbasis rho_eigenbasis(const Matrix& rho, double degeneracy_tol) {
  const auto eig = eig_hermitian(rho);
  const Eigen::Index d = eig.values.size();
  RhoEigenbasis out;
  out.eigenvalues = eig.values.reverse();
  out.degenerate = eig.values(d - 1) - eig.values(0) <= degeneracy_tol;
  if (out.degenerate) {
    out.to_input = Matrix::Identity(d, d);
    return out;
  }
  out.to_input = eig.vectors.rowwise().reverse();
  return out;
}

}  // namespace fixq
