#include "fixq/qubit_solver.hpp"

#include "fixq/analytic.hpp"
#include "fixq/confidence.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>

namespace fixq {

namespace {

using Vec3 = Eigen::Vector3d;

// A target the dual sphere must touch: |w - center| = T - weight.
struct Touch {
  Vec3 center;
  double weight;
};

struct DualSphere {
  double t;
  Vec3 w;
};

// Dual spheres touching every point, with w restricted to their affine span.
// Needs affinely independent points (at most four).
//
// The unknown is the gap g = T - e to the heaviest point, which is the one a
// shrinking sphere collapses onto; solving for g itself keeps its relative
// accuracy as g -> 0, where solving for T would lose it.
std::vector<DualSphere> touching_spheres(const std::vector<Touch>& pts) {
  const int k = static_cast<int>(pts.size());
  std::vector<DualSphere> out;
  if (k < 2 || k > 4) return out;
  if (k == 2) {
    // Closed form: w on the segment between the centers.
    const Vec3 diff = pts[1].center - pts[0].center;
    const double dist = diff.norm();
    if (dist <= std::abs(pts[1].weight - pts[0].weight) + 1e-15) return out;
    const double t = 0.5 * (dist + pts[0].weight + pts[1].weight);
    if (t - pts[0].weight <= 1e-12 || t - pts[1].weight <= 1e-12) return out;
    out.push_back({t, pts[0].center + ((t - pts[0].weight) / dist) * diff});
    return out;
  }
  const int m = k - 1;
  std::size_t ref = 0;
  for (std::size_t i = 1; i < pts.size(); ++i)
    if (pts[i].weight > pts[ref].weight) ref = i;
  std::vector<Touch> others;
  for (std::size_t i = 0; i < pts.size(); ++i)
    if (i != ref) others.push_back(pts[i]);
  const Touch& base = pts[ref];

  Eigen::Matrix3Xd diffs(3, m);
  for (int i = 0; i < m; ++i) diffs.col(i) = others[static_cast<std::size_t>(i)].center - base.center;
  const double scale = std::max(1.0, diffs.cwiseAbs().maxCoeff());
  Eigen::HouseholderQR<Eigen::Matrix3Xd> qr(diffs);
  const Eigen::MatrixXd rfac = qr.matrixQR().topRows(m).triangularView<Eigen::Upper>();
  for (int i = 0; i < m; ++i)
    if (std::abs(rfac(i, i)) < 1e-10 * scale) return out;
  const Eigen::Matrix3Xd basis = qr.householderQ() * Eigen::Matrix3Xd::Identity(3, m);

  // With x = w - base (in the span) and delta_i = e_base - e_i >= 0:
  // 2 x.d_i = (|d_i| - delta_i)(|d_i| + delta_i) - 2 g delta_i, and |x| = g.
  Eigen::MatrixXd ay(m, m);
  Eigen::VectorXd col_g(m), rhs(m);
  for (int i = 0; i < m; ++i) {
    const Eigen::VectorXd d = basis.transpose() * diffs.col(i);
    const double len = diffs.col(i).norm();
    const double delta = base.weight - others[static_cast<std::size_t>(i)].weight;
    ay.row(i) = 2.0 * d.transpose();
    col_g(i) = -2.0 * delta;
    rhs(i) = (len - delta) * (len + delta);
  }
  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(ay);
  const Eigen::VectorXd y0 = lu.solve(rhs);
  const Eigen::VectorXd y1 = lu.solve(col_g);

  // |y0 + y1 g|^2 = g^2
  const double qa = y1.squaredNorm() - 1.0;
  const double qb = 2.0 * y0.dot(y1);
  const double qc = y0.squaredNorm();
  std::vector<double> roots;
  if (std::abs(qa) < 1e-14) {
    if (std::abs(qb) > 1e-300) roots.push_back(-qc / qb);
  } else {
    const double disc = qb * qb - 4.0 * qa * qc;
    if (disc < 0.0) return out;
    const double sq = std::sqrt(disc);
    const double q = -0.5 * (qb + std::copysign(sq, qb));
    roots.push_back(q / qa);
    if (std::abs(q) > 1e-300) roots.push_back(qc / q);
  }
  std::sort(roots.begin(), roots.end());
  for (double g : roots) {
    if (g <= 1e-12) continue;
    DualSphere s{base.weight + g, base.center + basis * (y0 + y1 * g)};
    bool ok = true;
    for (const auto& p : pts) {
      const double gap = s.t - p.weight;
      if (gap <= 1e-12 || std::abs((s.w - p.center).norm() - gap) > 1e-9 * std::max(1.0, gap)) {
        ok = false;
        break;
      }
    }
    if (ok) out.push_back(s);
  }
  return out;
}

Vec3 unit_normal(const DualSphere& s, const Touch& p) { return (s.w - p.center).normalized(); }

// Kernel of the m x (m+1) matrix of normals expressed in their span, by
// signed cofactors so that it varies continuously with the geometry.
Eigen::VectorXd cofactor_kernel(const std::vector<Vec3>& normals) {
  const int k = static_cast<int>(normals.size());
  const int m = k - 1;
  Eigen::Matrix3Xd raw(3, k);
  for (int i = 0; i < k; ++i) raw.col(i) = normals[static_cast<std::size_t>(i)];
  Eigen::MatrixXd n;
  if (m == 3) {
    n = raw;
  } else {
    // Coordinates in the m-dimensional span of the normals.
    Eigen::JacobiSVD<Eigen::Matrix3Xd> svd(raw, Eigen::ComputeFullU);
    n = svd.matrixU().leftCols(m).transpose() * raw;
  }
  Eigen::VectorXd c(k);
  for (int i = 0; i < k; ++i) {
    Eigen::MatrixXd minor(m, m);
    for (int col = 0, out = 0; col < k; ++col)
      if (col != i) minor.col(out++) = n.col(col);
    c(i) = ((i % 2) ? -1.0 : 1.0) * minor.determinant();
  }
  return c;
}

double smaller_generalized_eigenvalue(const Matrix& a, const Matrix& b) {
  const double det_b = (b(0, 0) * b(1, 1) - b(0, 1) * b(1, 0)).real();
  const double det_a = (a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0)).real();
  const double mid = (a(0, 0) * b(1, 1) + a(1, 1) * b(0, 0)).real() -
                     2.0 * (a(0, 1) * std::conj(b(0, 1))).real();
  const double disc = std::max(0.0, mid * mid - 4.0 * det_a * det_b);
  return (mid - std::sqrt(disc)) / (2.0 * det_b);
}

struct Geometry {
  double r;
  Vec3 rho_vec;
  std::vector<Touch> states;  // eta_j v_j, eta_j
};

Geometry geometry_of(const Ensemble& e) {
  Geometry g;
  g.r = e.average()(0, 0).real();
  g.rho_vec = bloch_form(e.average()).vec;
  for (int j = 0; j < e.size(); ++j)
    g.states.push_back({e.prior(j) * bloch_form(e.state(j)).vec, e.prior(j)});
  return g;
}

bool dual_feasible(const Geometry& g, const DualSphere& s, double tol) {
  for (const auto& p : g.states)
    if ((s.w - p.center).norm() > s.t - p.weight + tol) return false;
  return true;
}

std::optional<SolverCase> assemble(const Ensemble& e, double q, const std::vector<int>& subset,
                                   const DualSphere& s, double a, std::vector<double> alpha,
                                   const std::vector<Vec3>& normals, double beta0,
                                   const Vec3& n0, const QubitSolverOptions& opt) {
  if (a < -1e-12 || beta0 < -1e-12) return std::nullopt;
  for (double& x : alpha) {
    if (x < -1e-10) return std::nullopt;
    x = std::max(x, 0.0);
  }
  a = std::max(a, 0.0);
  SolverCase c;
  c.subset = subset;
  c.a = a;
  c.weights = alpha;
  c.pi0_weight = q > 0.0 ? std::max(beta0, 0.0) : 0.0;
  c.povm.pis.assign(static_cast<std::size_t>(e.size()), Matrix::Zero(2, 2));
  Matrix sum = Matrix::Zero(2, 2);
  for (std::size_t i = 0; i < subset.size(); ++i) {
    const Matrix el = from_bloch(alpha[i], -alpha[i] * normals[i].normalized());
    c.povm.pis[static_cast<std::size_t>(subset[i])] = el;
    sum += el;
  }
  c.povm.pi0 = Matrix::Identity(2, 2) - sum;
  // Weights near a degenerate geometry can overshoot by rounding, leaving pi0
  // slightly negative. Move that sliver into the element that covers it.
  const auto eig0 = eig_hermitian(c.povm.pi0);
  if (eig0.values(0) < 0.0) {
    if (eig0.values(0) < -1e-8) return std::nullopt;
    const Vector v = eig0.vectors.col(0);
    const Matrix sliver = eig0.values(0) * projector(v);
    std::size_t host = 0;
    double best = -1.0;
    for (std::size_t i = 0; i < subset.size(); ++i) {
      const auto& el = c.povm.pis[static_cast<std::size_t>(subset[i])];
      const double cover = (v.adjoint() * el * v)(0, 0).real();
      if (cover > best) {
        best = cover;
        host = static_cast<std::size_t>(subset[i]);
      }
    }
    c.povm.pis[host] += sliver;
    c.povm.pi0 -= sliver;
  }
  if (q > 0.0) c.pi0_direction = ket_from_bloch(-n0);
  const Matrix z = from_bloch(s.t, s.w);
  c.z00 = z(0, 0).real();
  c.z11 = z(1, 1).real();
  c.re_z10 = z(1, 0).real();
  c.im_z10 = z(1, 0).imag();
  c.certificate = {z, a};
  const auto card = certify(e, c.povm, c.certificate, q, opt.tol);
  if (!card.optimal) return std::nullopt;
  c.pc = card.pc;
  return c;
}

// Q = 0, or Q > 0 with four guessed states: the guessed states alone fix Z.
std::optional<SolverCase> solve_fixed_Z(const Ensemble& e, double q, const std::vector<int>& subset,
                                        const QubitSolverOptions& opt) {
  const Geometry g = geometry_of(e);
  std::vector<Touch> pts;
  for (int j : subset) pts.push_back(g.states[static_cast<std::size_t>(j)]);
  for (const auto& s : touching_spheres(pts)) {
    if (!dual_feasible(g, s, 1e-9)) continue;
    std::vector<Vec3> normals;
    for (const auto& p : pts) normals.push_back(unit_normal(s, p));
    const Matrix z = from_bloch(s.t, s.w);
    const double a = a_from_Z(z(0, 0).real(), z(1, 1).real(), z(1, 0).real(), z(1, 0).imag(), g.r);
    std::vector<double> alpha(subset.size());
    double beta0 = 0.0;
    Vec3 n0 = Vec3::Zero();
    if (q <= 0.0) {
      const Eigen::VectorXd c = cofactor_kernel(normals);
      const double total = c.sum();
      if (std::abs(total) < 1e-14) continue;
      for (std::size_t i = 0; i < alpha.size(); ++i) alpha[i] = 2.0 * c(static_cast<Eigen::Index>(i)) / total;
    } else {
      if (subset.size() != 4 || s.t - a <= 1e-12) continue;
      n0 = (s.w - a * g.rho_vec) / (s.t - a);
      const double g0 = 0.5 * (1.0 - n0.dot(g.rho_vec));
      if (g0 <= 1e-14) continue;
      beta0 = q / g0;
      Eigen::Matrix4d sys;
      Eigen::Vector4d rhs;
      for (int i = 0; i < 4; ++i) {
        sys.block<3, 1>(0, i) = normals[static_cast<std::size_t>(i)];
        sys(3, i) = 1.0;
      }
      rhs.head<3>() = -beta0 * n0;
      rhs(3) = 2.0 - beta0;
      const Eigen::FullPivLU<Eigen::Matrix4d> lu(sys);
      if (!lu.isInvertible()) continue;
      const Eigen::Vector4d sol = lu.solve(rhs);
      for (int i = 0; i < 4; ++i) alpha[static_cast<std::size_t>(i)] = sol(i);
    }
    if (auto c = assemble(e, q, subset, s, a, alpha, normals, beta0, n0, opt)) return c;
  }
  return std::nullopt;
}

// Q > 0 with at most three guessed states: scan the scalar a, where Z must
// also touch a rho, and bracket the rate condition beta0 g0(a) = Q.
std::optional<SolverCase> solve_scanned_a(const Ensemble& e, double q, const std::vector<int>& subset,
                                          const QubitSolverOptions& opt) {
  const Geometry g = geometry_of(e);
  const double a_max = max_confidence(e).a_large_q;
  const int k = static_cast<int>(subset.size());

  struct Eval {
    DualSphere s;
    std::vector<Vec3> normals;  // guessed states then the inconclusive point
    Eigen::VectorXd c;
    double h;
  };
  auto evaluate = [&](double a) {
    std::vector<Touch> pts;
    for (int j : subset) pts.push_back(g.states[static_cast<std::size_t>(j)]);
    const Touch p0{a * g.rho_vec, a};
    pts.push_back(p0);
    std::vector<Eval> out;
    for (const auto& s : touching_spheres(pts)) {
      Eval ev{s, {}, {}, 0.0};
      for (const auto& p : pts) ev.normals.push_back(unit_normal(s, p));
      ev.c = cofactor_kernel(ev.normals);
      const double norm = ev.c.norm();
      if (norm < 1e-300) continue;
      // Orient the kernel by its total so the sign of h does not depend on
      // the basis the cofactors were taken in.
      if (ev.c.sum() < 0.0) ev.c = -ev.c;
      const double g0 = 0.5 * (1.0 - ev.normals.back().dot(g.rho_vec));
      ev.h = (2.0 * ev.c(k) * g0 - q * ev.c.sum()) / norm;
      out.push_back(std::move(ev));
    }
    return out;
  };

  auto finish = [&](double a, const Eval& ev) -> std::optional<SolverCase> {
    const double total = ev.c.sum();
    if (std::abs(total) < 1e-14) return std::nullopt;
    if (!dual_feasible(g, ev.s, 1e-9)) return std::nullopt;
    std::vector<double> alpha(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) alpha[static_cast<std::size_t>(i)] = 2.0 * ev.c(i) / total;
    const double beta0 = 2.0 * ev.c(k) / total;
    std::vector<Vec3> normals(ev.normals.begin(), ev.normals.begin() + k);
    return assemble(e, q, subset, ev.s, a, alpha, normals, beta0, ev.normals.back(), opt);
  };

  // Bisect a sign change of root b between lo and hi.
  auto refine = [&](double lo, double hi, const std::vector<Eval>& at_lo,
                    const std::vector<Eval>& at_hi, std::size_t b) -> std::optional<SolverCase> {
    double h_lo = at_lo[b].h;
    Eval best = std::abs(h_lo) < std::abs(at_hi[b].h) ? at_lo[b] : at_hi[b];
    double best_a = std::abs(h_lo) < std::abs(at_hi[b].h) ? lo : hi;
    for (int it = 0; it < 200 && hi - lo > 1e-16 * std::max(1.0, hi); ++it) {
      const double mid = 0.5 * (lo + hi);
      const auto at = evaluate(mid);
      if (at.size() != at_lo.size()) return std::nullopt;
      const double hm = at[b].h;
      if (std::abs(hm) < std::abs(best.h)) {
        best = at[b];
        best_a = mid;
      }
      if (hm == 0.0) break;
      if ((hm > 0) == (h_lo > 0)) {
        lo = mid;
        h_lo = hm;
      } else {
        hi = mid;
      }
    }
    return finish(best_a, best);
  };

  // Compare root by root where the number of dual spheres agrees; where it
  // changes, subdivide so that roots ending inside the interval are not lost.
  std::function<std::optional<SolverCase>(double, double, const std::vector<Eval>&,
                                          const std::vector<Eval>&, int)>
      scan = [&](double lo, double hi, const std::vector<Eval>& at_lo, const std::vector<Eval>& at_hi,
                 int depth) -> std::optional<SolverCase> {
    if (at_lo.size() == at_hi.size()) {
      for (std::size_t b = 0; b < at_hi.size(); ++b) {
        if (at_lo[b].h == 0.0) {
          if (auto c = finish(lo, at_lo[b])) return c;
          continue;
        }
        if ((at_lo[b].h > 0) == (at_hi[b].h > 0)) continue;
        if (auto c = refine(lo, hi, at_lo, at_hi, b)) return c;
      }
      return std::nullopt;
    }
    if (depth >= 48) return std::nullopt;
    const double mid = 0.5 * (lo + hi);
    const auto at_mid = evaluate(mid);
    if (auto c = scan(lo, mid, at_lo, at_mid, depth + 1)) return c;
    return scan(mid, hi, at_mid, at_hi, depth + 1);
  };

  const int n_grid = std::max(opt.a_grid, 8);
  std::vector<double> grid(static_cast<std::size_t>(n_grid));
  for (int i = 0; i < n_grid; ++i) grid[static_cast<std::size_t>(i)] = a_max * i / (n_grid - 1);
  std::vector<Eval> prev = evaluate(grid[0]);
  for (int i = 1; i < n_grid; ++i) {
    std::vector<Eval> cur = evaluate(grid[static_cast<std::size_t>(i)]);
    if (auto c = scan(grid[static_cast<std::size_t>(i - 1)], grid[static_cast<std::size_t>(i)], prev, cur, 0))
      return c;
    prev = std::move(cur);
  }
  for (const auto& ev : prev)
    if (std::abs(ev.h) < 1e-13)
      if (auto c = finish(grid.back(), ev)) return c;
  return std::nullopt;
}

// Z = eta_j rho_j: guess state j whenever the outcome is conclusive.
std::optional<SolverCase> solve_dominant(const Ensemble& e, double q, int j,
                                         const QubitSolverOptions& opt) {
  const Matrix z = e.weighted(j);
  const Matrix& rho = e.average();
  const double a = std::max(0.0, smaller_generalized_eigenvalue(z, rho));
  SolverCase c;
  c.subset = {j};
  c.a = a;
  c.povm.pis.assign(static_cast<std::size_t>(e.size()), Matrix::Zero(2, 2));
  if (q <= 0.0) {
    c.povm.pi0 = Matrix::Zero(2, 2);
    c.povm.pis[static_cast<std::size_t>(j)] = Matrix::Identity(2, 2);
    c.weights = {1.0};
  } else {
    const Matrix slack = z - a * rho;
    if (slack.cwiseAbs().maxCoeff() < 1e-12) return std::nullopt;
    const auto eig = eig_hermitian(slack);
    const Vector v = eig.vectors.col(0);
    const double g0 = (v.adjoint() * rho * v)(0, 0).real();
    const double beta0 = q / g0;
    if (beta0 > 1.0 + 1e-12) return std::nullopt;
    c.povm.pi0 = beta0 * projector(v);
    c.povm.pis[static_cast<std::size_t>(j)] = Matrix::Identity(2, 2) - c.povm.pi0;
    c.pi0_weight = beta0;
    c.pi0_direction = v;
    c.weights = {1.0};
  }
  c.z00 = z(0, 0).real();
  c.z11 = z(1, 1).real();
  c.re_z10 = z(1, 0).real();
  c.im_z10 = z(1, 0).imag();
  c.certificate = {z, a};
  const auto card = certify(e, c.povm, c.certificate, q, opt.tol);
  if (!card.optimal) return std::nullopt;
  c.pc = card.pc;
  return c;
}

void require_qubit(const Ensemble& e, double q) {
  if (e.dim() != 2) throw Error(ErrorKind::kUnsupported, "qubit solver: dimension must be 2");
  if (!(q >= 0.0 && q <= 1.0)) throw Error(ErrorKind::kValidation, "q: must lie in [0, 1]");
}

Solution to_input_basis(const Ensemble& e, const SolverCase& c, const Matrix& w, double q,
                        Regime regime) {
  Solution s;
  s.povm.pi0 = w * c.povm.pi0 * w.adjoint();
  for (const auto& p : c.povm.pis) s.povm.pis.push_back(w * p * w.adjoint());
  s.certificate = {w * c.certificate.z * w.adjoint(), c.certificate.a};
  s.q = q;
  s.pc = measure_rates(e, s.povm).pc;
  s.regime = regime;
  s.basis_map = w;
  return finalize(s);
}

}  // namespace

double a_from_Z(double z00, double z11, double re_z10, double im_z10, double r) {
  const double x = z00 / (2.0 * r), y = z11 / (2.0 * (1.0 - r));
  const double off = (re_z10 * re_z10 + im_z10 * im_z10) / (r * (1.0 - r));
  return x + y - std::sqrt((x - y) * (x - y) + off);
}

std::optional<SolverCase> solve_case_M1(const Ensemble& e, double q, int j,
                                        const QubitSolverOptions& opt) {
  require_qubit(e, q);
  if (auto c = solve_dominant(e, q, j, opt)) return c;
  if (q > 0.0) return solve_scanned_a(e, q, {j}, opt);
  return std::nullopt;
}

std::optional<SolverCase> solve_case_M2(const Ensemble& e, double q, const std::vector<int>& subset,
                                        const QubitSolverOptions& opt) {
  require_qubit(e, q);
  if (subset.size() != 2) throw Error(ErrorKind::kValidation, "solve_case_M2: need two states");
  return q > 0.0 ? solve_scanned_a(e, q, subset, opt) : solve_fixed_Z(e, q, subset, opt);
}

std::optional<SolverCase> solve_case_M3(const Ensemble& e, double q, const std::vector<int>& subset,
                                        const QubitSolverOptions& opt) {
  require_qubit(e, q);
  if (subset.size() != 3) throw Error(ErrorKind::kValidation, "solve_case_M3: need three states");
  return q > 0.0 ? solve_scanned_a(e, q, subset, opt) : solve_fixed_Z(e, q, subset, opt);
}

std::optional<SolverCase> solve_case_M4(const Ensemble& e, double q, const std::vector<int>& subset,
                                        const QubitSolverOptions& opt) {
  require_qubit(e, q);
  if (subset.size() != 4) throw Error(ErrorKind::kValidation, "solve_case_M4: need four states");
  return solve_fixed_Z(e, q, subset, opt);
}

Solution solve_qubit(const Ensemble& e, double q, const QubitSolverOptions& opt) {
  require_qubit(e, q);
  const RhoEigenbasis basis = rho_eigenbasis(e.average());
  const Matrix& w = basis.to_input;
  const Ensemble er = e.rotated(w);
  const double r = er.average()(0, 0).real();

  if (r >= 1.0 - 1e-12) {
    // Every state is the same pure state; nothing to discriminate.
    int best = 0;
    for (int j = 1; j < e.size(); ++j)
      if (e.prior(j) > e.prior(best)) best = j;
    SolverCase c;
    c.povm.pi0 = q * Matrix::Identity(2, 2);
    c.povm.pis.assign(static_cast<std::size_t>(e.size()), Matrix::Zero(2, 2));
    c.povm.pis[static_cast<std::size_t>(best)] = (1.0 - q) * Matrix::Identity(2, 2);
    c.certificate = {er.weighted(best), e.prior(best)};
    return to_input_basis(e, c, w, q, Regime::kSingleState);
  }

  auto accept = [&](const Solution& s) { return certify(e, s.povm, s.certificate, q, opt.tol).optimal; };

  if (opt.shortcuts) {
    const LargeQWitness wit = large_Q_witness(e);
    if (q >= wit.q_min - 1e-12) {
      Solution s = large_Q_solution(e, wit, q);
      if (accept(s)) return s;
    }
    if (auto s = solve_equiprobable(e, q); s && accept(*s)) return *s;
  }

  const int n = e.size();
  std::ostringstream tried;
  for (int m = 1; m <= std::min(n, 4); ++m) {
    std::vector<bool> pick(static_cast<std::size_t>(n), false);
    std::fill(pick.begin(), pick.begin() + m, true);
    do {
      std::vector<int> subset;
      for (int j = 0; j < n; ++j)
        if (pick[static_cast<std::size_t>(j)]) subset.push_back(j);
      std::optional<SolverCase> c;
      switch (m) {
        case 1: c = solve_case_M1(er, q, subset[0], opt); break;
        case 2: c = solve_case_M2(er, q, subset, opt); break;
        case 3: c = solve_case_M3(er, q, subset, opt); break;
        default: c = solve_case_M4(er, q, subset, opt); break;
      }
      if (c) {
        try {
          Solution s = to_input_basis(e, *c, w, q, m == 1 ? Regime::kSingleState : Regime::kGuessedSubset);
          if (accept(s)) return s;
        } catch (const Error& err) {
          if (err.kind() != ErrorKind::kFeasibility) throw;
        }
      }
    } while (std::prev_permutation(pick.begin(), pick.end()));
    tried << " M=" << m;
  }

  std::ostringstream os;
  os << "qubit solver: no candidate certifies at Q = " << q << " (tried" << tried.str()
     << "); r = " << r << ", states:";
  for (int j = 0; j < n; ++j) {
    const auto b = bloch_form(e.state(j));
    os << " [eta=" << e.prior(j) << " v=(" << b.vec.x() << "," << b.vec.y() << "," << b.vec.z() << ")]";
  }
  throw Error(ErrorKind::kInternal, os.str());
}

}  // namespace fixq
