#include "fixq/confidence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace fixq {

namespace {

void require_full_rank(const Matrix& rho) {
  const auto eig = eig_hermitian(rho);
  if (eig.values(0) <= 1e-12) {
    std::ostringstream os;
    os << "average state is singular: eigenvalue " << eig.values(0) << " along (";
    for (Eigen::Index i = 0; i < eig.vectors.rows(); ++i)
      os << (i ? ", " : "") << eig.vectors(i, 0);
    os << ")";
    throw Error(ErrorKind::kSingular, os.str());
  }
}

// Largest lambda with det(a - lambda b) = 0, b positive definite.
double top_generalized_eigenvalue(const Matrix& a, const Matrix& b) {
  if (a.rows() == 2) {
    const double det_b = (b(0, 0) * b(1, 1) - b(0, 1) * b(1, 0)).real();
    const double det_a = (a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0)).real();
    const double mid = (a(0, 0) * b(1, 1) + a(1, 1) * b(0, 0)).real() -
                       2.0 * (a(0, 1) * std::conj(b(0, 1))).real();
    const double disc = std::max(0.0, mid * mid - 4.0 * det_a * det_b);
    return (mid + std::sqrt(disc)) / (2.0 * det_b);
  }
  const Eigen::LLT<Matrix> llt(b);
  const Matrix linv = llt.matrixL().solve(Matrix::Identity(b.rows(), b.cols()));
  return max_eigenvalue(linv * a * linv.adjoint());
}

Eigen::Vector4d hvec(const Matrix& h) {
  return {h(0, 0).real(), h(1, 1).real(), h(0, 1).real(), h(0, 1).imag()};
}

Eigen::Vector3d bloch_of_ket(const Vector& k) { return bloch_form(projector(k.normalized())).vec; }

}  // namespace

ConfidenceReport max_confidence(const Ensemble& e) {
  require_full_rank(e.average());
  ConfidenceReport rep;
  for (int j = 0; j < e.size(); ++j)
    rep.c.push_back(std::clamp(top_generalized_eigenvalue(e.weighted(j), e.average()), 0.0, 1.0));
  rep.a_large_q = *std::max_element(rep.c.begin(), rep.c.end());
  for (int j = 0; j < e.size(); ++j)
    if (rep.c[static_cast<std::size_t>(j)] >= rep.a_large_q - 1e-12) rep.maximizers.push_back(j);
  return rep;
}

double large_Q_value(const Ensemble& e, double q) {
  return max_confidence(e).a_large_q * (1.0 - q);
}

LargeQWitness large_Q_witness(const Ensemble& e) {
  if (e.dim() != 2) throw Error(ErrorKind::kUnsupported, "large_Q_witness: qubit ensembles only");
  const auto rep = max_confidence(e);
  const Matrix& rho = e.average();
  const Matrix s = psd_power(rho, -0.5);
  const Matrix rho_inv = psd_power(rho, -1.0);

  // Candidate detector directions c with Pi = beta S c c^dag S.
  struct Direction {
    int state;
    Vector c;
  };
  std::vector<Direction> dirs;
  for (int j : rep.maximizers) {
    const auto eig = eig_hermitian(s * e.weighted(j) * s);
    if (eig.values(1) - eig.values(0) <= 1e-12) {
      // Every detector reaches the same confidence; the eigenbasis of rho spans it.
      const auto re = eig_hermitian(rho);
      dirs.push_back({j, re.vectors.col(0)});
      dirs.push_back({j, re.vectors.col(1)});
    } else {
      dirs.push_back({j, eig.vectors.col(1)});
    }
  }

  // Dual: minimize <y|rho|y> / min_k |<c_k|y>|^2 over unit y, capped at 1.
  const Eigen::Vector3d v = bloch_form(rho).vec;
  std::vector<Eigen::Vector3d> u;
  for (const auto& d : dirs) u.push_back(bloch_of_ket(d.c));
  auto h = [&](const Eigen::Vector3d& n) {
    double worst = std::numeric_limits<double>::infinity();
    for (const auto& uk : u) worst = std::min(worst, 1.0 + n.dot(uk));
    if (worst <= 1e-14) return std::numeric_limits<double>::infinity();
    return (1.0 + n.dot(v)) / worst;
  };
  double best = 1.0;
  Eigen::Vector3d best_n = Eigen::Vector3d::Zero();
  auto consider = [&](Eigen::Vector3d n) {
    if (n.norm() < 1e-14) return;
    n.normalize();
    const double val = h(n);
    if (val < best) {
      best = val;
      best_n = n;
    }
  };
  for (const auto& d : dirs) consider(bloch_of_ket(rho_inv * d.c));
  for (std::size_t k = 0; k < u.size(); ++k)
    for (std::size_t l = k + 1; l < u.size(); ++l) {
      Eigen::Vector3d m = u[k] - u[l];
      if (m.norm() < 1e-12) continue;
      m.normalize();
      Eigen::Vector3d e1 = m.unitOrthogonal();
      Eigen::Vector3d e2 = m.cross(e1);
      const double a = v.dot(e1), b = v.dot(e2), c = u[k].dot(e1), d = u[k].dot(e2);
      const double amp = std::hypot(c - a, b - d);
      if (amp < 1e-15) continue;
      const double ratio = (a * d - b * c) / amp;
      if (std::abs(ratio) > 1.0) continue;
      const double phase = std::atan2(c - a, b - d);
      for (double sign : {1.0, -1.0}) {
        const double t = phase + sign * std::acos(ratio);
        consider(std::cos(t) * e1 + std::sin(t) * e2);
      }
      for (std::size_t q = l + 1; q < u.size(); ++q) {
        const Eigen::Vector3d n = (u[k] - u[l]).cross(u[k] - u[q]);
        consider(n);
        consider(-n);
      }
    }

  Matrix target = rho;
  if (best < 1.0 - 1e-13) {
    const Vector perp = ket_from_bloch(-best_n);
    target = rho - (1.0 - best) * projector(perp);
  }
  Eigen::MatrixXd basis(4, static_cast<Eigen::Index>(dirs.size()));
  for (std::size_t k = 0; k < dirs.size(); ++k)
    basis.col(static_cast<Eigen::Index>(k)) = hvec(projector(dirs[k].c));
  Eigen::VectorXd beta = nnls(basis, hvec(target)).x;

  Matrix used = Matrix::Zero(2, 2);
  for (std::size_t k = 0; k < dirs.size(); ++k) used += beta(static_cast<Eigen::Index>(k)) * projector(dirs[k].c);
  const double excess = max_eigenvalue(s * used * s);
  if (excess > 1.0) beta /= excess;

  LargeQWitness w;
  w.confidence = rep.a_large_q;
  w.pis.assign(static_cast<std::size_t>(e.size()), Matrix::Zero(2, 2));
  double total = 0.0;
  for (std::size_t k = 0; k < dirs.size(); ++k) {
    const double bk = beta(static_cast<Eigen::Index>(k));
    total += bk;
    const Vector detector = s * dirs[k].c;
    w.pis[static_cast<std::size_t>(dirs[k].state)] += bk * projector(detector);
  }
  w.q_min = std::clamp(1.0 - total, 0.0, 1.0);
  return w;
}

Solution large_Q_solution(const Ensemble& e, const LargeQWitness& w, double q) {
  if (q < w.q_min - 1e-12 || q > 1.0)
    throw Error(ErrorKind::kValidation, "large_Q_solution: Q below the witness threshold");
  const int d = e.dim();
  const double scale = w.q_min < 1.0 ? std::clamp((1.0 - q) / (1.0 - w.q_min), 0.0, 1.0) : 0.0;
  Solution sol;
  sol.povm.pi0 = Matrix::Identity(d, d);
  for (const auto& p : w.pis) {
    Matrix el = scale * p;
    el = 0.5 * (el + el.adjoint());
    sol.povm.pis.push_back(el);
    sol.povm.pi0 -= el;
  }
  sol.povm.pi0 = 0.5 * (sol.povm.pi0 + sol.povm.pi0.adjoint());
  sol.certificate = {w.confidence * e.average(), w.confidence};
  sol.q = q;
  sol.pc = w.confidence * (1.0 - q);
  sol.regime = Regime::kLargeQ;
  return finalize(sol);
}

QuRegime find_Qu(const Ensemble& e, const std::function<double(double)>& curve) {
  const double c = max_confidence(e).a_large_q;
  auto gap = [&](double q) {
    const double g = curve(q) - c * (1.0 - q);
    if (g > 1e-9) {
      std::ostringstream os;
      os << "find_Qu: curve exceeds the large-Q bound by " << g << " at Q = " << q;
      throw Error(ErrorKind::kInternal, os.str());
    }
    return g;
  };
  if (std::abs(curve(1.0)) > 1e-9)
    throw Error(ErrorKind::kInternal, "find_Qu: curve does not vanish at Q = 1");
  QuRegime out;
  out.attained_by = "Z = C rho with rank-one maximum-confidence detectors";
  // The curve usually joins the line tangentially, so a loose meeting test
  // would stop early by about sqrt(tolerance); 1e-12 is just above rounding.
  constexpr double kMeet = 1e-12;
  if (gap(0.0) >= -kMeet) {
    out.q_u = 0.0;
    return out;
  }
  double lo = 0.0, hi = 1.0;
  while (hi - lo > 1e-10) {
    const double mid = 0.5 * (lo + hi);
    (gap(mid) >= -kMeet ? hi : lo) = mid;
  }
  out.q_u = hi;
  return out;
}

}  // namespace fixq
