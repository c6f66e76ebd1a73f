#include "fixq/certifier.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace fixq {

std::vector<int> Povm::active(double tol) const {
  std::vector<int> out;
  for (std::size_t j = 0; j < pis.size(); ++j)
    if (pis[j].cwiseAbs().maxCoeff() > tol) out.push_back(static_cast<int>(j));
  return out;
}

void check_feasible(const Povm& m, int dim, int n_states, double tol) {
  if (m.pi0.rows() != dim || m.pi0.cols() != dim)
    throw Error(ErrorKind::kDimension, "povm: pi0 dimension does not match the ensemble");
  if (static_cast<int>(m.pis.size()) != n_states) {
    std::ostringstream os;
    os << "povm: expected " << n_states << " guessing operators, got " << m.pis.size();
    throw Error(ErrorKind::kDimension, os.str());
  }
  Matrix sum = m.pi0;
  auto check_element = [&](const Matrix& el, const std::string& name) {
    if (el.rows() != dim || el.cols() != dim)
      throw Error(ErrorKind::kDimension, "povm: " + name + " has the wrong dimension");
    if (hermiticity_defect(el) > tol)
      throw Error(ErrorKind::kFeasibility, "povm: " + name + " is not Hermitian");
    const double lo = min_eigenvalue(0.5 * (el + el.adjoint()));
    if (lo < -tol) {
      std::ostringstream os;
      os << "povm: " << name << " is not positive semidefinite (smallest eigenvalue " << lo << ")";
      throw Error(ErrorKind::kFeasibility, os.str());
    }
  };
  check_element(m.pi0, "pi0");
  for (std::size_t j = 0; j < m.pis.size(); ++j) {
    check_element(m.pis[j], "pis[" + std::to_string(j) + "]");
    sum += m.pis[j];
  }
  const double defect = (sum - Matrix::Identity(dim, dim)).cwiseAbs().maxCoeff();
  if (defect > tol) {
    std::ostringstream os;
    os << "povm: completeness violated, max |sum - I| = " << defect;
    throw Error(ErrorKind::kFeasibility, os.str());
  }
}

Rates measure_rates(const Ensemble& e, const Povm& m, double tol) {
  check_feasible(m, e.dim(), e.size(), tol);
  Rates r;
  r.q = trace_product(e.average(), m.pi0);
  for (int j = 0; j < e.size(); ++j)
    r.pc += e.prior(j) * trace_product(e.state(j), m.pis[static_cast<std::size_t>(j)]);
  r.pe = 1.0 - r.q - r.pc;
  return r;
}

Scorecard certify(const Ensemble& e, const Povm& m, const DualCertificate& cert, double q,
                  double tol) {
  if (cert.a < 0.0) throw Error(ErrorKind::kValidation, "certificate: a must be nonnegative");
  if (cert.z.rows() != e.dim() || cert.z.cols() != e.dim())
    throw Error(ErrorKind::kDimension, "certificate: Z dimension does not match the ensemble");
  require_hermitian(cert.z, "certificate Z");

  Scorecard s;
  std::ostringstream why;
  Rates r;
  try {
    r = measure_rates(e, m, tol);
  } catch (const Error& err) {
    if (err.kind() != ErrorKind::kFeasibility) throw;
    // Still report the numbers; an infeasible POVM is simply not optimal.
    why << err.what();
    r.q = trace_product(e.average(), m.pi0);
    for (int j = 0; j < e.size(); ++j)
      r.pc += e.prior(j) * trace_product(e.state(j), m.pis[static_cast<std::size_t>(j)]);
    r.pe = 1.0 - r.q - r.pc;
  }
  s.q = r.q;
  s.pc = r.pc;
  s.pe = r.pe;
  s.dual_value = real_trace(cert.z) - cert.a * q;
  s.q_error = std::abs(r.q - q);

  auto inspect = [&](const Matrix& slack, const Matrix& element, const std::string& name) {
    const Matrix h = 0.5 * (slack + slack.adjoint());
    const double margin = min_eigenvalue(h);
    const double resid = (h * element).norm();
    s.psd_margins.push_back(margin);
    s.complementarity_residuals.push_back(resid);
    if (why.tellp() == 0) {
      if (margin < -tol) why << name << " slack not PSD (min eigenvalue " << margin << ")";
      else if (resid > tol) why << name << " complementarity residual " << resid;
    }
  };
  inspect(cert.z - cert.a * e.average(), m.pi0, "inconclusive");
  for (int j = 0; j < e.size(); ++j)
    inspect(cert.z - e.weighted(j), m.pis[static_cast<std::size_t>(j)],
            "state " + std::to_string(j + 1));

  if (why.tellp() == 0 && s.q_error > tol) why << "inconclusive rate off target by " << s.q_error;
  if (why.tellp() == 0 && std::abs(s.dual_value - s.pc) > 10.0 * tol)
    why << "dual value " << s.dual_value << " differs from Pc " << s.pc;
  s.diagnostic = why.str();
  s.optimal = s.diagnostic.empty();
  return s;
}

PairwiseReport pairwise_relation_check(const Ensemble& e, const DualCertificate& cert,
                                       const std::vector<int>& guessed) {
  if (e.dim() != 2)
    throw Error(ErrorKind::kUnsupported, "pairwise_relation_check: qubit ensembles only");
  if (cert.z.rows() != 2 || cert.z.cols() != 2)
    throw Error(ErrorKind::kDimension, "pairwise_relation_check: Z must be 2x2");
  PairwiseReport rep;
  const double tr = real_trace(cert.z);
  std::vector<Matrix> scaled;
  for (int j : guessed) {
    if (j < 0 || j >= e.size())
      throw Error(ErrorKind::kDimension, "pairwise_relation_check: state index out of range");
    const double qj = tr - e.prior(j);
    if (qj <= 0.0) {
      rep.skipped.push_back(j);
      continue;
    }
    const auto eig = eig_hermitian(cert.z - e.weighted(j));
    rep.checked.push_back(j);
    scaled.push_back(qj * projector(eig.vectors.col(1)));
  }
  for (std::size_t x = 0; x < rep.checked.size(); ++x)
    for (std::size_t y = x + 1; y < rep.checked.size(); ++y) {
      const int j = rep.checked[x], k = rep.checked[y];
      const Matrix lhs = scaled[y] - scaled[x];
      const Matrix rhs = e.weighted(j) - e.weighted(k);
      rep.max_residual = std::max(rep.max_residual, (lhs - rhs).norm());
    }
  return rep;
}

PairwiseReport pairwise_relation_check(const Ensemble& e, const DualCertificate& cert,
                                       const Povm& m) {
  return pairwise_relation_check(e, cert, m.active());
}

}  // namespace fixq
