#include "fixq/analytic.hpp"

#include "fixq/confidence.hpp"
#include "fixq/qubit_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace fixq {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

Matrix diag2(double x, double y) {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = x;
  m(1, 1) = y;
  return m;
}

bool certifies(const Ensemble& e, const Solution& s) {
  return certify(e, s.povm, s.certificate, s.q, kCertifyTol).optimal;
}

// Per-group data of the partially symmetric family in the computational basis.
struct Group {
  int first, count;
  double eta, s, p, x;
  double k() const { return eta * eta * p * p * x * (1.0 - x); }
};

}  // namespace

// ---------------------------------------------------------------------------
// uniformly mixed vs pure

UmixSolution solve_umix(int d, double eta2, double q) {
  if (!(q >= 0.0 && q <= 1.0)) throw Error(ErrorKind::kValidation, "q: must lie in [0, 1]");
  const Ensemble e = build_umix(d, eta2);
  const double eta1 = 1.0 - eta2;
  const double k = d / (eta1 + d * eta2);
  const double q_u = eta1 / d + eta2;
  Matrix psi = Matrix::Zero(d, d);
  psi(0, 0) = 1.0;
  const Matrix id = Matrix::Identity(d, d);
  const Matrix perp = id - psi;

  auto make = [&](Matrix pi0, Matrix pi1, Matrix pi2, Matrix z, double a, Regime regime) {
    Solution s;
    s.povm.pi0 = std::move(pi0);
    s.povm.pis = {std::move(pi1), std::move(pi2)};
    s.certificate = {std::move(z), a};
    s.q = q;
    s.pc = measure_rates(e, s.povm).pc;
    s.regime = regime;
    return finalize(s);
  };

  if (q > q_u) {
    const double scale = d * (1.0 - q) / ((d - 1) * eta1);
    return {make(id - scale * perp, scale * perp, Matrix::Zero(d, d), e.average(), 1.0,
                 Regime::kLargeQ),
            std::nullopt};
  }
  const Matrix pi0 = k * q * psi;
  auto both_guessed = [&] {
    return make(pi0, perp, (1.0 - k * q) * psi, eta2 * psi + eta1 / d * perp, eta2 * k,
                Regime::kGuessedSubset);
  };
  auto mixed_only = [&] {
    return make(pi0, id - k * q * psi, Matrix::Zero(d, d), eta1 / d * id, eta1 * k / d,
                Regime::kSingleState);
  };
  const double threshold = 1.0 / (d + 1.0);
  if (std::abs(eta2 - threshold) <= 1e-12) return {both_guessed(), mixed_only()};
  if (eta2 > threshold) return {both_guessed(), std::nullopt};
  return {mixed_only(), std::nullopt};
}

// ---------------------------------------------------------------------------
// equal priors, equal purity

std::optional<Solution> solve_equiprobable(const Ensemble& e, double q) {
  if (e.dim() != 2) return std::nullopt;
  const int n = e.size();
  const double purity = bloch_form(e.state(0)).vec.norm();
  for (int j = 0; j < n; ++j) {
    if (std::abs(e.prior(j) - 1.0 / n) > 1e-12) return std::nullopt;
    if (std::abs(bloch_form(e.state(j)).vec.norm() - purity) > 1e-12) return std::nullopt;
  }
  if (purity <= 1e-12) return std::nullopt;

  const RhoEigenbasis basis = rho_eigenbasis(e.average());
  const double r = basis.eigenvalues(0);
  const Vector top = basis.to_input.col(0);
  // With rho = I/2 every direction is on top and Z - a rho vanishes, so the
  // inconclusive element may be spread evenly, which keeps the rest in the cone.
  const Matrix pi0 = basis.degenerate ? Matrix(q * Matrix::Identity(2, 2)) : Matrix((q / r) * projector(top));
  if (q / r > 1.0 + 1e-12) return std::nullopt;

  std::vector<Matrix> kets;
  Eigen::MatrixXd sys(4, n);
  for (int j = 0; j < n; ++j) {
    const Eigen::Vector3d dir = bloch_form(e.state(j)).vec / purity;
    kets.push_back(projector(ket_from_bloch(dir)));
    const Matrix& p = kets.back();
    sys.col(j) << p(0, 0).real(), p(1, 1).real(), p(0, 1).real(), p(0, 1).imag();
  }
  const Matrix rest = Matrix::Identity(2, 2) - pi0;
  Eigen::Vector4d rhs(rest(0, 0).real(), rest(1, 1).real(), rest(0, 1).real(), rest(0, 1).imag());
  const NnlsResult fit = nnls(sys, rhs);
  if (fit.residual > 1e-10) return std::nullopt;

  Solution s;
  s.povm.pis.resize(static_cast<std::size_t>(n));
  Matrix sum = Matrix::Zero(2, 2);
  for (int j = 0; j < n; ++j) {
    s.povm.pis[static_cast<std::size_t>(j)] = fit.x(j) * kets[static_cast<std::size_t>(j)];
    sum += s.povm.pis[static_cast<std::size_t>(j)];
  }
  s.povm.pi0 = Matrix::Identity(2, 2) - sum;
  const double level = (1.0 + purity) / (2.0 * n);
  s.certificate = {level * Matrix::Identity(2, 2), level / r};
  s.q = q;
  s.pc = measure_rates(e, s.povm).pc;
  s.regime = Regime::kAllGroups;
  return finalize(s);
}

// ---------------------------------------------------------------------------
// partially symmetric

std::vector<double> split_weights(int n, double total, WeightSplit split) {
  std::vector<double> w(static_cast<std::size_t>(n), 0.0);
  if (n <= 0) return w;
  if (split == WeightSplit::kSymmetric || n <= 2) {
    std::fill(w.begin(), w.end(), total / n);
    return w;
  }
  if (n % 2 == 0) {
    w[0] = w[static_cast<std::size_t>(n / 2)] = total / 2.0;
    return w;
  }
  const double c = std::cos(std::numbers::pi / n);
  w[0] = w[1] = total / (2.0 + 2.0 * c);
  w[static_cast<std::size_t>((n + 1) / 2)] = total * c / (1.0 + c);
  return w;
}

double group_confidence(double eta, double s, double p, double r) {
  const double lead = r - s * (2.0 * r - 1.0);
  const double inner = 1.0 - (1.0 - p * p) * r * (1.0 - r) / (lead * lead);
  return eta * lead / (2.0 * r * (1.0 - r)) * (1.0 + std::sqrt(std::max(0.0, inner)));
}

double one_group_Fu(double s, double p, double x, double r) {
  const double root = p * std::sqrt(x * (1.0 - x));
  const double shift = (r - s) / (2.0 * r * root);
  const double v = std::sqrt(shift * shift + (1.0 - r) / r) - shift;
  return v * v;
}

namespace {

class SymmetricSolver {
 public:
  SymmetricSolver(const PartialSymmetrySpec& spec, double q, WeightSplit split)
      : spec_(spec), q_(q), split_(split), e_(build_partially_symmetric(spec)) {
    r_ = e_.average()(0, 0).real();
    groups_.push_back({0, spec.n1, spec.eta, spec.s(), spec.p, spec.b});
    if (spec.n2 > 0) groups_.push_back({spec.n1, spec.n2, spec.eta_prime, spec.s_prime(), spec.p_prime, spec.c});
    base_.C = group_confidence(spec.eta, spec.s(), spec.p, r_);
    base_.C_prime = spec.n2 > 0 ? group_confidence(spec.eta_prime, spec.s_prime(), spec.p_prime, r_) : kNaN;
    base_.F_u = spec.p > 0.0 ? one_group_Fu(spec.s(), spec.p, spec.b, r_) : kNaN;
    base_.d0 = spec.eta * (1.0 - spec.b) - spec.eta_prime * (1.0 - spec.c);
    base_.d1 = spec.eta_prime * spec.c - spec.eta * spec.b;
    base_.eta0 = base_.eta_cr = kNaN;
  }

  SymmetricSolution run() {
    if (!(q_ >= 0.0 && q_ <= 1.0)) throw Error(ErrorKind::kValidation, "q: must lie in [0, 1]");
    if (groups_.size() == 2)
      if (auto s = all_groups()) return *s;
    for (std::size_t g = 0; g < groups_.size(); ++g)
      if (auto s = one_group(g)) return *s;
    if (auto s = large_q()) return *s;
    Solution fallback = solve_qubit(e_, q_);
    SymmetricInternals in = base_;
    in.regime = fallback.regime;
    in.z00 = fallback.certificate.z(0, 0).real();
    in.z11 = fallback.certificate.z(1, 1).real();
    in.a = fallback.certificate.a;
    return {fallback, in};
  }

 private:
  // Inconclusive operator choices for a diagonal Z.
  std::vector<std::pair<double, double>> pi0_options(double z00, double z11) const {
    const double lhs = z00 / r_, rhs = z11 / (1.0 - r_);
    std::vector<std::pair<double, double>> out;
    if (q_ <= 0.0) return {{0.0, 0.0}};
    if (lhs < rhs - 1e-12 || std::abs(lhs - rhs) <= 1e-12) out.push_back({q_ / r_, 0.0});
    if (lhs > rhs + 1e-12 || std::abs(lhs - rhs) <= 1e-12) out.push_back({0.0, q_ / (1.0 - r_)});
    if (std::abs(lhs - rhs) <= 1e-12) out.push_back({q_, q_});
    return out;
  }

  std::optional<SymmetricSolution> build(double z00, double z11, std::pair<double, double> pi0,
                                         const std::vector<double>& totals, Regime regime) const {
    const double t = z00 + z11;
    const Matrix z = diag2(z00, z11);
    if (pi0.first > 1.0 + 1e-12 || pi0.second > 1.0 + 1e-12) return std::nullopt;
    Solution s;
    s.povm.pis.assign(static_cast<std::size_t>(e_.size()), Matrix::Zero(2, 2));
    std::vector<double> alpha(static_cast<std::size_t>(e_.size()), 0.0);
    for (std::size_t g = 0; g < groups_.size(); ++g) {
      const Group& gr = groups_[g];
      if (totals[g] <= 0.0) continue;
      if (t - gr.eta <= 1e-12) return std::nullopt;
      const auto w = split_weights(gr.count, totals[g], split_);
      for (int i = 0; i < gr.count; ++i) {
        const int j = gr.first + i;
        const Matrix slack = (z - e_.weighted(j)) / (t - gr.eta);
        alpha[static_cast<std::size_t>(j)] = w[static_cast<std::size_t>(i)];
        Matrix el = w[static_cast<std::size_t>(i)] * (Matrix::Identity(2, 2) - slack);
        s.povm.pis[static_cast<std::size_t>(j)] = 0.5 * (el + el.adjoint());
      }
    }
    s.povm.pi0 = diag2(pi0.first, pi0.second);
    const double a = q_ > 0.0 ? (pi0.first > 0.0 && pi0.second > 0.0
                                     ? z00 / r_
                                     : (pi0.first > 0.0 ? z00 / r_ : z11 / (1.0 - r_)))
                              : std::min(z00 / r_, z11 / (1.0 - r_));
    s.certificate = {z, std::max(0.0, a)};
    s.q = q_;
    s.regime = regime;
    try {
      s.pc = measure_rates(e_, s.povm).pc;
    } catch (const Error&) {
      return std::nullopt;
    }
    s = finalize(s);
    if (!certifies(e_, s)) return std::nullopt;

    SymmetricInternals in = base_;
    in.regime = regime;
    in.z00 = z00;
    in.z11 = z11;
    in.a = s.certificate.a;
    in.A1 = totals[0];
    in.A2 = totals.size() > 1 ? totals[1] : 0.0;
    in.f0 = 1.0 - pi0.second;
    in.f1 = 1.0 - pi0.first;
    in.F = in.f0 > 0.0 ? in.f1 / in.f0 : kNaN;
    in.alpha = alpha;
    return SymmetricSolution{s, in};
  }

  std::optional<SymmetricSolution> all_groups() const {
    const Group& g1 = groups_[0];
    const Group& g2 = groups_[1];
    const double k1 = g1.k(), k2 = g2.k();
    if (k1 <= 1e-15) return std::nullopt;
    // x = z00 - eta1 s1, z11 = eta1 (1 - s1) + k1 / x.
    const double dd = g1.eta * (1.0 - g1.s) - g2.eta * (1.0 - g2.s);
    const double ee = g1.eta * g1.s - g2.eta * g2.s;
    const double qa = dd, qb = k1 + ee * dd - k2, qc = ee * k1;
    std::vector<double> xs;
    if (std::abs(qa) < 1e-15) {
      if (std::abs(qb) > 1e-15) xs.push_back(-qc / qb);
    } else {
      const double disc = qb * qb - 4.0 * qa * qc;
      if (disc >= 0.0) {
        const double sq = std::sqrt(disc);
        const double h = -0.5 * (qb + std::copysign(sq, qb));
        xs.push_back(h / qa);
        if (std::abs(h) > 1e-300) xs.push_back(qc / h);
      }
    }
    struct Cand {
      double z00, z11;
    };
    std::vector<Cand> cands;
    for (double x : xs) {
      if (x <= 1e-14 || x + ee < -1e-14) continue;
      cands.push_back({g1.eta * g1.s + x, g1.eta * (1.0 - g1.s) + k1 / x});
    }
    std::sort(cands.begin(), cands.end(),
              [](const Cand& a, const Cand& b) { return a.z00 + a.z11 < b.z00 + b.z11; });
    for (const auto& c : cands) {
      const double t = c.z00 + c.z11;
      if (t - g1.eta <= 1e-12 || t - g2.eta <= 1e-12) continue;
      for (const auto& pi0 : pi0_options(c.z00, c.z11)) {
        const double f0 = 1.0 - pi0.second, f1 = 1.0 - pi0.first;
        Eigen::Matrix2d m;
        m << (c.z00 - g1.eta * g1.s) / (t - g1.eta), (c.z00 - g2.eta * g2.s) / (t - g2.eta),
            (c.z11 - g1.eta * (1.0 - g1.s)) / (t - g1.eta), (c.z11 - g2.eta * (1.0 - g2.s)) / (t - g2.eta);
        if (std::abs(m.determinant()) < 1e-14) continue;
        const Eigen::Vector2d amps = m.inverse() * Eigen::Vector2d(f0, f1);
        if (amps(0) < -1e-12 || amps(1) < -1e-12) continue;
        if (amps(0) <= 1e-12 || amps(1) <= 1e-12) continue;  // one-group branches handle these
        if (auto s = build(c.z00, c.z11, pi0, {amps(0), amps(1)}, Regime::kAllGroups)) return s;
      }
    }
    return std::nullopt;
  }

  std::optional<SymmetricSolution> one_group(std::size_t gi) const {
    const Group& g = groups_[gi];
    const double k = g.k();
    if (k <= 1e-15) return std::nullopt;
    const double root = std::sqrt(k);  // eta p sqrt(x(1-x))
    struct Branch {
      double f0, f1;
      std::pair<double, double> pi0;
    };
    std::vector<Branch> branches;
    if (q_ <= 0.0) {
      branches.push_back({1.0, 1.0, {0.0, 0.0}});
    } else {
      if (q_ < r_) branches.push_back({1.0, 1.0 - q_ / r_, {q_ / r_, 0.0}});
      if (q_ < 1.0 - r_) branches.push_back({1.0 - q_ / (1.0 - r_), 1.0, {0.0, q_ / (1.0 - r_)}});
    }
    for (const auto& br : branches) {
      const double f = br.f1 / br.f0;
      if (!(f > 0.0)) continue;
      const double z00 = g.eta * g.s + root / std::sqrt(f);
      const double z11 = g.eta * (1.0 - g.s) + root * std::sqrt(f);
      std::vector<double> totals(groups_.size(), 0.0);
      totals[gi] = br.f0 + br.f1;
      const Regime regime = gi == 0 ? Regime::kGroup1Only : Regime::kGroup2Only;
      if (auto s = build(z00, z11, br.pi0, totals, regime)) return s;
    }
    return std::nullopt;
  }

  std::optional<SymmetricSolution> large_q() const {
    const LargeQWitness w = large_Q_witness(e_);
    if (q_ < w.q_min - 1e-12) return std::nullopt;
    Solution s = large_Q_solution(e_, w, q_);
    if (!certifies(e_, s)) return std::nullopt;
    SymmetricInternals in = base_;
    in.regime = Regime::kLargeQ;
    in.z00 = s.certificate.z(0, 0).real();
    in.z11 = s.certificate.z(1, 1).real();
    in.a = s.certificate.a;
    return SymmetricSolution{s, in};
  }

  PartialSymmetrySpec spec_;
  double q_;
  WeightSplit split_;
  Ensemble e_;
  double r_ = 0.5;
  std::vector<Group> groups_;
  SymmetricInternals base_;
};

}  // namespace

SymmetricSolution solve_partially_symmetric(const PartialSymmetrySpec& spec, double q,
                                            WeightSplit split) {
  return SymmetricSolver(spec, q, split).run();
}

MirrorConstants mirror_constants(double b, double eta) {
  if (!(b > 0.0 && b < 1.0)) throw Error(ErrorKind::kValidation, "b: must lie in (0, 1)");
  if (!(eta > 0.0 && eta < 0.5)) throw Error(ErrorKind::kValidation, "eta: must lie in (0, 1/2)");
  MirrorConstants m;
  m.r = 1.0 - 2.0 * eta * (1.0 - b);
  m.C = eta * (m.r + b * (1.0 - 2.0 * m.r)) / (m.r * (1.0 - m.r));
  m.C_prime = (1.0 - 2.0 * eta) / m.r;
  m.eta0 = 1.0 / (2.0 + 4.0 * b);
  m.eta_cr = 1.0 / (2.0 + b + std::sqrt(b * (1.0 - b)));
  m.F_u = b * (1.0 - m.r) * (1.0 - m.r) / ((1.0 - b) * m.r * m.r);
  if (eta <= m.eta0) m.q_u = 1.0 - m.r;
  else m.q_u = m.F_u <= 1.0 ? m.r * (1.0 - m.F_u) : (1.0 - m.r) * (1.0 - 1.0 / m.F_u);
  return m;
}

SymmetricSolution solve_mirror_symmetric(double b, double eta, double q, WeightSplit split) {
  const MirrorConstants mc = mirror_constants(b, eta);
  SymmetricSolution out = solve_partially_symmetric(mirror_spec(b, eta), q, split);
  out.internals.eta0 = mc.eta0;
  out.internals.eta_cr = mc.eta_cr;
  out.internals.F_u = mc.F_u;
  return out;
}

// ---------------------------------------------------------------------------
// closed-form curves

Regime PiecewiseSolution::regime_at(double q) const {
  std::size_t i = 0;
  while (i < breakpoints.size() && q > breakpoints[i]) ++i;
  return branches[i];
}

PiecewiseSolution equiprobable_symmetric_curve(const PartialSymmetrySpec& spec) {
  spec.validate();
  if (!spec.equiprobable())
    throw Error(ErrorKind::kUnsupported, "closed-form curve needs equal priors and purities");
  // Relabel so that |0> carries the larger eigenvalue of rho and the first
  // group is the one tilted further toward |1>.
  PartialSymmetrySpec cs = spec;
  if (cs.r() < 0.5) {
    cs.b = 1.0 - cs.b;
    cs.c = 1.0 - cs.c;
  }
  const bool swapped = cs.n2 > 0 && cs.c < cs.b;
  if (swapped) {
    std::swap(cs.n1, cs.n2);
    std::swap(cs.b, cs.c);
    std::swap(cs.p, cs.p_prime);
    std::swap(cs.eta, cs.eta_prime);
  }
  const Regime guessed_group = swapped ? Regime::kGroup2Only : Regime::kGroup1Only;
  const double r = cs.r();
  const int n = cs.n();
  const double p = cs.p, b = cs.b, s = cs.s(), eta = cs.eta;
  const double fu = one_group_Fu(s, p, b, r);
  const double root = p * std::sqrt(b * (1.0 - b));

  PiecewiseSolution pw;
  pw.confidence = group_confidence(eta, s, p, r);
  pw.q_u = fu <= 1.0 ? r * (1.0 - fu) : (1.0 - r) * (1.0 - 1.0 / fu);
  const double q_cr = r * (1.0 - 2.0 * b) / (1.0 - b);
  const bool has_cr = b < 0.5 && cs.n2 > 0;
  if (has_cr) pw.q_cr = q_cr;

  const double c_val = pw.confidence, q_u = pw.q_u;
  auto p_one = [=](double q) {
    if (fu <= 1.0) return eta * (1.0 - s / r * q + 2.0 * root * std::sqrt(std::max(0.0, 1.0 - q / r)));
    return eta * (1.0 - (1.0 - s) / (1.0 - r) * q +
                  2.0 * root * std::sqrt(std::max(0.0, 1.0 - q / (1.0 - r))));
  };
  pw.value = [=](double q) {
    if (has_cr && q <= q_cr) return (1.0 + p) / n * (1.0 - q / (2.0 * r));
    if (q <= q_u) return p_one(q);
    return c_val * (1.0 - q);
  };
  if (has_cr) {
    pw.breakpoints = {q_cr, q_u};
    pw.branches = {Regime::kAllGroups, guessed_group, Regime::kLargeQ};
  } else {
    pw.breakpoints = {q_u};
    pw.branches = {guessed_group, Regime::kLargeQ};
  }
  return pw;
}

PiecewiseSolution mirror_curve(double b, double eta) {
  const MirrorConstants mc = mirror_constants(b, eta);
  const double r = mc.r;
  const double root = std::sqrt(b * (1.0 - b));
  const double lead = 1.0 - eta * (2.0 + b);
  const double ratio = eta * eta * b * (1.0 - b) / (lead * lead);
  const double fu = mc.F_u;

  auto p_two = [=](double q) {
    if (fu <= 1.0) return eta * (1.0 - b / r * q + 2.0 * root * std::sqrt(std::max(0.0, 1.0 - q / r)));
    return eta * (1.0 - (1.0 - b) / (1.0 - r) * q +
                  2.0 * root * std::sqrt(std::max(0.0, 1.0 - q / (1.0 - r))));
  };
  PiecewiseSolution pw;
  pw.q_u = mc.q_u;
  if (eta >= mc.eta0) {
    pw.confidence = mc.C;
    const double q_cr = (lead > 0.0) ? r * (1.0 - ratio) : -1.0;
    const bool has_cr = q_cr >= 0.0;
    if (has_cr) pw.q_cr = q_cr;
    auto p_all = [=](double q) {
      return (1.0 - 2.0 * eta) * ((1.0 - eta * (1.0 + 2.0 * b)) / lead - q / r);
    };
    const double c_val = mc.C, q_u = mc.q_u;
    pw.value = [=](double q) {
      if (has_cr && q <= q_cr) return p_all(q);
      if (q <= q_u) return p_two(q);
      return c_val * (1.0 - q);
    };
    if (has_cr) {
      pw.breakpoints = {q_cr, q_u};
      pw.branches = {Regime::kAllGroups, Regime::kGroup1Only, Regime::kLargeQ};
    } else {
      pw.breakpoints = {q_u};
      pw.branches = {Regime::kGroup1Only, Regime::kLargeQ};
    }
  } else {
    pw.confidence = mc.C_prime;
    const double q_crp = lead > 0.0 ? (1.0 - r) * (1.0 - 1.0 / ratio) : (1.0 - r);
    const bool has_crp = q_crp >= 0.0;
    if (has_crp) pw.q_cr = q_crp;
    auto p_all = [=](double q) {
      return (1.0 - 2.0 * eta) / lead * (1.0 - eta * (1.0 + 2.0 * b) - eta * (1.0 - b) * q / (1.0 - r));
    };
    const double c_val = mc.C_prime, q_u = mc.q_u;
    pw.value = [=](double q) {
      if (has_crp && q <= q_crp) return p_two(q);
      if (q <= q_u) return p_all(q);
      return c_val * (1.0 - q);
    };
    if (has_crp) {
      pw.breakpoints = {q_crp, q_u};
      pw.branches = {Regime::kGroup1Only, Regime::kAllGroups, Regime::kLargeQ};
    } else {
      pw.breakpoints = {q_u};
      pw.branches = {Regime::kAllGroups, Regime::kLargeQ};
    }
  }
  return pw;
}

}  // namespace fixq
