#include "fixq/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <numbers>
#include <random>

namespace fixq {

void SearchConfig::validate() const {
  if (resolution < 8) throw Error(ErrorKind::kValidation, "resolution: must be at least 8");
  if (refinement < 0) throw Error(ErrorKind::kValidation, "refinement: must be nonnegative");
  if (random_starts < 0) throw Error(ErrorKind::kValidation, "random_starts: must be nonnegative");
}

// ---------------------------------------------------------------------------
// linear program

namespace {

class Tableau {
 public:
  Tableau(const Eigen::MatrixXd& a, const Eigen::VectorXd& b) : m_(a.rows()), n_(a.cols()) {
    t_ = Eigen::MatrixXd::Zero(m_, n_ + m_ + 1);
    for (Eigen::Index i = 0; i < m_; ++i) {
      const double sign = b(i) < 0.0 ? -1.0 : 1.0;
      t_.row(i).head(n_) = sign * a.row(i);
      t_(i, n_ + i) = 1.0;
      t_(i, n_ + m_) = sign * b(i);
      basis_.push_back(n_ + i);
    }
  }

  // Maximize cost.x over columns allowed to enter. Returns false on an
  // unbounded direction.
  bool optimize(const Eigen::VectorXd& cost, Eigen::Index enter_limit) {
    for (int iter = 0; iter < 500; ++iter) {
      Eigen::Index enter = -1;
      for (Eigen::Index j = 0; j < enter_limit; ++j) {
        double reduced = -cost(j);
        for (Eigen::Index i = 0; i < m_; ++i) reduced += cost(basis_[static_cast<std::size_t>(i)]) * t_(i, j);
        if (reduced < -1e-12) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return true;
      Eigen::Index leave = -1;
      double best = 0.0;
      for (Eigen::Index i = 0; i < m_; ++i) {
        if (t_(i, enter) <= 1e-9) continue;
        const double ratio = t_(i, n_ + m_) / t_(i, enter);
        if (leave < 0 || ratio < best - 1e-15 ||
            (ratio <= best + 1e-15 && basis_[static_cast<std::size_t>(i)] < basis_[static_cast<std::size_t>(leave)])) {
          leave = i;
          best = ratio;
        }
      }
      if (leave < 0) return false;
      pivot(leave, enter);
    }
    return true;
  }

  void pivot(Eigen::Index row, Eigen::Index col) {
    t_.row(row) /= t_(row, col);
    for (Eigen::Index i = 0; i < m_; ++i)
      if (i != row && t_(i, col) != 0.0) t_.row(i) -= t_(i, col) * t_.row(row);
    basis_[static_cast<std::size_t>(row)] = col;
  }

  // Pivot artificial variables out of the basis where possible.
  void expel_artificials() {
    for (Eigen::Index i = 0; i < m_; ++i) {
      if (basis_[static_cast<std::size_t>(i)] < n_) continue;
      for (Eigen::Index j = 0; j < n_; ++j)
        if (std::abs(t_(i, j)) > 1e-9) {
          pivot(i, j);
          break;
        }
    }
  }

  const std::vector<Eigen::Index>& basis() const { return basis_; }

  Eigen::VectorXd solution() const {
    Eigen::VectorXd x = Eigen::VectorXd::Zero(n_ + m_);
    for (Eigen::Index i = 0; i < m_; ++i) x(basis_[static_cast<std::size_t>(i)]) = t_(i, n_ + m_);
    return x;
  }

 private:
  Eigen::Index m_, n_;
  Eigen::MatrixXd t_;
  std::vector<Eigen::Index> basis_;
};

}  // namespace

LpResult solve_lp(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, const Eigen::VectorXd& c) {
  const Eigen::Index m = a.rows(), n = a.cols();
  Tableau tab(a, b);
  Eigen::VectorXd phase1 = Eigen::VectorXd::Zero(n + m);
  phase1.tail(m).setConstant(-1.0);
  tab.optimize(phase1, n + m);
  LpResult out;
  const Eigen::VectorXd x1 = tab.solution();
  if (x1.tail(m).sum() > 1e-10 * std::max(1.0, b.cwiseAbs().sum())) return out;
  tab.expel_artificials();
  Eigen::VectorXd phase2 = Eigen::VectorXd::Zero(n + m);
  phase2.head(n) = c;
  if (!tab.optimize(phase2, n)) return out;
  out.x = tab.solution().head(n).cwiseMax(0.0);
  // Ill-conditioned pivots can leave a wrong vertex; trust only verified ones.
  if ((a * out.x - b).cwiseAbs().maxCoeff() > 1e-10 * std::max(1.0, b.cwiseAbs().maxCoeff())) return out;
  out.value = c.dot(out.x);
  out.feasible = true;

  // Duals from B^T y = c_B, with any artificial left in the basis priced at 0.
  Eigen::MatrixXd basis_cols(m, m);
  Eigen::VectorXd cb(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const Eigen::Index j = tab.basis()[static_cast<std::size_t>(i)];
    if (j < n) {
      basis_cols.col(i) = a.col(j);
      cb(i) = c(j);
    } else {
      basis_cols.col(i) = Eigen::VectorXd::Unit(m, j - n) * (b(j - n) < 0.0 ? -1.0 : 1.0);
      cb(i) = 0.0;
    }
  }
  out.dual = basis_cols.transpose().completeOrthogonalDecomposition().solve(cb);
  return out;
}

// ---------------------------------------------------------------------------
// search

namespace {

Eigen::Vector4d hvec(const Matrix& h) {
  return {h(0, 0).real(), h(1, 1).real(), h(0, 1).real(), h(0, 1).imag()};
}

// Unit Bloch directions: index 0 is the inconclusive outcome, then one per state.
using Config = std::vector<Eigen::Vector3d>;

// Rotate d by angle t toward the first (axis = 0) or second axis of a frame
// orthogonal to d. Moves along great circles avoid the pole trap of polar
// coordinates.
Eigen::Vector3d turn(const Eigen::Vector3d& d, int axis, double t) {
  const Eigen::Vector3d e1 = d.unitOrthogonal();
  const Eigen::Vector3d e = axis == 0 ? e1 : Eigen::Vector3d(d.cross(e1));
  return (std::cos(t) * d + std::sin(t) * e).normalized();
}

class Search {
 public:
  Search(const Ensemble& e, double q) : e_(e), q_(q), n_(e.size()) {}

  struct Eval {
    bool feasible = false;
    double pc = -1.0;
    Povm povm;
  };

  // Every outcome may use every direction of the pool and its antipode, so
  // aligning two outcomes never needs two directions to move at once.
  Eval evaluate(const Config& cfg, bool build = false) const {
    const int dirs = 2 * static_cast<int>(cfg.size());
    const int k = (n_ + 1) * dirs;
    Eigen::MatrixXd a(5, k);
    Eigen::VectorXd c = Eigen::VectorXd::Zero(k);
    std::vector<Matrix> elems(static_cast<std::size_t>(dirs));
    for (int d = 0; d < dirs; ++d) {
      const Eigen::Vector3d& v = cfg[static_cast<std::size_t>(d / 2)];
      elems[static_cast<std::size_t>(d)] = projector(ket_from_bloch(d % 2 == 0 ? v : Eigen::Vector3d(-v)));
    }
    for (int o = 0; o <= n_; ++o)
      for (int d = 0; d < dirs; ++d) {
        const Matrix& p = elems[static_cast<std::size_t>(d)];
        const int col = o * dirs + d;
        a.col(col).head<4>() = hvec(p);
        a(4, col) = o == 0 ? real_trace(e_.average() * p) : 0.0;
        if (o > 0) c(col) = e_.prior(o - 1) * real_trace(e_.state(o - 1) * p);
      }
    Eigen::VectorXd b(5);
    b << 1.0, 1.0, 0.0, 0.0, q_;
    const LpResult lp = solve_lp(a, b, c);
    Eval out;
    if (!lp.feasible) return out;
    out.feasible = true;
    out.pc = lp.value;
    if (build) {
      out.povm.pis.assign(static_cast<std::size_t>(n_), Matrix::Zero(2, 2));
      Matrix sum = Matrix::Zero(2, 2);
      for (int o = 1; o <= n_; ++o) {
        Matrix el = Matrix::Zero(2, 2);
        for (int d = 0; d < dirs; ++d) el += lp.x(o * dirs + d) * elems[static_cast<std::size_t>(d)];
        out.povm.pis[static_cast<std::size_t>(o - 1)] = el;
        sum += el;
      }
      out.povm.pi0 = Matrix::Identity(2, 2) - sum;
      out.povm.pi0 = 0.5 * (out.povm.pi0 + out.povm.pi0.adjoint());
    }
    return out;
  }

  // Grid stage: each direction in turn scans two great circles through itself.
  double grid_descent(Config& cfg, int res, double current) const {
    for (int pass = 0; pass < 2; ++pass) {
      bool moved = false;
      for (std::size_t o = 0; o < cfg.size(); ++o)
        for (int axis = 0; axis < 2; ++axis)
          for (int g = 1; g < 2 * res; ++g) {
            Config trial = cfg;
            trial[o] = turn(cfg[o], axis, std::numbers::pi * g / res);
            const Eval ev = evaluate(trial);
            if (ev.feasible && ev.pc > current + 1e-14) {
              current = ev.pc;
              cfg = std::move(trial);
              moved = true;
            }
          }
      if (!moved) break;
    }
    return current;
  }

  Config guided_start() const {
    Config cfg(static_cast<std::size_t>(n_ + 1), Eigen::Vector3d::UnitZ());
    const Eigen::Vector3d rv = bloch_form(e_.average()).vec;
    if (rv.norm() > 1e-12) cfg[0] = rv.normalized();
    for (int j = 0; j < n_; ++j) {
      const Eigen::Vector3d v = bloch_form(e_.state(j)).vec;
      if (v.norm() > 1e-12) cfg[static_cast<std::size_t>(j + 1)] = v.normalized();
    }
    return cfg;
  }

  Config random_start(std::mt19937_64& rng) const {
    std::normal_distribution<double> g(0.0, 1.0);
    Config cfg(static_cast<std::size_t>(n_ + 1));
    for (auto& d : cfg) {
      do d = Eigen::Vector3d(g(rng), g(rng), g(rng));
      while (d.norm() < 1e-6);
      d.normalize();
    }
    return cfg;
  }

 private:
  const Ensemble& e_;
  double q_;
  int n_;
};

struct Candidate {
  double pc = -1.0;
  Povm povm;
  std::string source;
};

// Validated lower bound: the POVM must be feasible and reproduce Q.
bool accept(const Ensemble& e, double q, const Povm& m, double& pc) {
  try {
    check_feasible(m, e.dim(), e.size());
    const Rates r = measure_rates(e, m);
    if (std::abs(r.q - q) > 1e-9) return false;
    pc = r.pc;
    return true;
  } catch (const Error&) {
    return false;
  }
}

void offer(Candidate& best, const Ensemble& e, double q, Povm m, const std::string& source) {
  double pc = 0.0;
  if (!accept(e, q, m, pc)) return;
  if (pc > best.pc + 1e-15) best = {pc, std::move(m), source};
}

// Closed-form extras: the baseline, one dominant state with a rank-one
// inconclusive operator, and maximum-confidence detectors.
void explicit_candidates(Candidate& best, const Ensemble& e, double q, int res) {
  const int n = e.size();
  const Matrix id = Matrix::Identity(2, 2);
  for (int j = 0; j < n; ++j) {
    Povm m;
    m.pi0 = q * id;
    m.pis.assign(static_cast<std::size_t>(n), Matrix::Zero(2, 2));
    m.pis[static_cast<std::size_t>(j)] = (1.0 - q) * id;
    offer(best, e, q, m, "baseline");
  }
  for (int j = 0; j < n; ++j)
    for (int t = 0; t <= res; ++t)
      for (int p = 0; p < 2 * res; ++p) {
        const double th = std::numbers::pi * t / res, ph = std::numbers::pi * p / res;
        const Vector v = ket_from_bloch(
            Eigen::Vector3d(std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), std::cos(th)));
        const Matrix pv = projector(v);
        const double weight = real_trace(e.average() * pv);
        if (weight <= 1e-14 || q / weight > 1.0) continue;
        const double pc = e.prior(j) * (1.0 - q / weight * real_trace(e.state(j) * pv));
        if (pc <= best.pc) continue;
        Povm m;
        m.pi0 = (q / weight) * pv;
        m.pis.assign(static_cast<std::size_t>(n), Matrix::Zero(2, 2));
        m.pis[static_cast<std::size_t>(j)] = id - m.pi0;
        offer(best, e, q, m, "dominant");
      }
  if (min_eigenvalue(e.average()) > 1e-12) {
    const Matrix s = psd_power(e.average(), -0.5);
    for (int j = 0; j < n; ++j) {
      const auto eig = eig_hermitian(s * e.weighted(j) * s);
      const Matrix det = projector(Vector(s * eig.vectors.col(1)));
      const double reach = max_eigenvalue(det);
      if ((1.0 - q) * reach > 1.0 + 1e-12) continue;
      Povm m;
      m.pis.assign(static_cast<std::size_t>(n), Matrix::Zero(2, 2));
      m.pis[static_cast<std::size_t>(j)] = (1.0 - q) * det;
      m.pi0 = id - m.pis[static_cast<std::size_t>(j)];
      offer(best, e, q, m, "max-confidence");
    }
  }
}

// Column generation from the grid result: the LP duals define an operator
// whose top eigenvector is the most profitable new rank-one element for each
// outcome. Every master solution is primal feasible, so the value only grows.
Povm generate_columns(const Ensemble& e, double q, const Config& seed, int rounds) {
  const int n = e.size();
  struct Column {
    int outcome;
    Matrix p;
  };
  std::vector<Column> cols;
  for (int o = 0; o <= n; ++o)
    for (const auto& d : seed)
      for (double sign : {1.0, -1.0}) cols.push_back({o, projector(ket_from_bloch(Eigen::Vector3d(sign * d)))});

  Eigen::VectorXd b(5);
  b << 1.0, 1.0, 0.0, 0.0, q;
  LpResult lp;
  for (int round = 0; round <= rounds; ++round) {
    const auto k = static_cast<Eigen::Index>(cols.size());
    Eigen::MatrixXd a(5, k);
    Eigen::VectorXd c(k);
    for (Eigen::Index i = 0; i < k; ++i) {
      const Column& col = cols[static_cast<std::size_t>(i)];
      a.col(i).head<4>() = hvec(col.p);
      a(4, i) = col.outcome == 0 ? real_trace(e.average() * col.p) : 0.0;
      c(i) = col.outcome == 0 ? 0.0 : e.prior(col.outcome - 1) * real_trace(e.state(col.outcome - 1) * col.p);
    }
    const LpResult next = solve_lp(a, b, c);
    if (!next.feasible) break;
    lp = next;
    if (round == rounds) break;
    Matrix y(2, 2);
    y << lp.dual(0), Complex(lp.dual(2), lp.dual(3)) / 2.0, Complex(lp.dual(2), -lp.dual(3)) / 2.0, lp.dual(1);
    bool added = false;
    for (int o = 0; o <= n; ++o) {
      const Matrix reduced = o == 0 ? Matrix(-y - lp.dual(4) * e.average()) : Matrix(e.weighted(o - 1) - y);
      const auto eig = eig_hermitian(reduced);
      if (eig.values(1) > 1e-13) {
        cols.push_back({o, projector(eig.vectors.col(1))});
        added = true;
      }
    }
    if (!added) break;
  }
  Povm m;
  m.pis.assign(static_cast<std::size_t>(n), Matrix::Zero(2, 2));
  if (lp.x.size() == 0) return m;
  Matrix sum = Matrix::Zero(2, 2);
  for (std::size_t i = 0; i < static_cast<std::size_t>(lp.x.size()); ++i) {
    if (cols[i].outcome == 0) continue;
    const Matrix el = lp.x(static_cast<Eigen::Index>(i)) * cols[i].p;
    m.pis[static_cast<std::size_t>(cols[i].outcome - 1)] += el;
    sum += el;
  }
  m.pi0 = Matrix::Identity(2, 2) - sum;
  m.pi0 = 0.5 * (m.pi0 + m.pi0.adjoint());
  return m;
}

}  // namespace

OracleResult brute_force(const Ensemble& e, double q, const SearchConfig& cfg) {
  cfg.validate();
  if (e.dim() != 2) throw Error(ErrorKind::kDimension, "brute_force: qubit ensembles only");
  if (!(q >= 0.0 && q <= 1.0)) throw Error(ErrorKind::kValidation, "q: must lie in [0, 1]");

  const Search search(e, q);
  Candidate best;
  explicit_candidates(best, e, q, 16);

  std::vector<int> levels;
  for (int res = 8; res < cfg.resolution; res *= 2) levels.push_back(res);
  levels.push_back(cfg.resolution);

  // Grid stage. Random starts only at the coarsest level; finer levels
  // continue from the best point so far.
  Config carried = search.guided_start();
  double carried_pc = -1.0;
  for (std::size_t level = 0; level < levels.size(); ++level) {
    const int res = levels[level];
    std::vector<Config> starts{carried};
    if (level == 0) {
      std::mt19937_64 rng(cfg.seed);
      for (int k = 0; k < cfg.random_starts; ++k) starts.push_back(search.random_start(rng));
    }
    std::vector<std::future<std::pair<double, Config>>> jobs;
    for (const Config& st : starts)
      jobs.push_back(std::async(std::launch::async, [&search, st, res] {
        Config c = st;
        const auto first = search.evaluate(c);
        const double pc = search.grid_descent(c, res, first.feasible ? first.pc : -1.0);
        return std::make_pair(pc, c);
      }));
    for (auto& job : jobs) {
      auto [pc, c] = job.get();
      if (pc > carried_pc + 1e-15) {
        carried_pc = pc;
        carried = c;
      }
    }
    if (carried_pc >= 0.0) {
      const auto ev = search.evaluate(carried, true);
      if (ev.feasible) offer(best, e, q, ev.povm, "rank-one search");
    }
  }
  offer(best, e, q, generate_columns(e, q, carried, cfg.refinement), "refined");

  OracleResult out;
  out.pc_lower = best.pc;
  out.best = best.povm;
  out.source = best.source;
  return out;
}

}  // namespace fixq
