#include "fixq/cli.hpp"

#include "fixq/analytic.hpp"
#include "fixq/confidence.hpp"
#include "fixq/qubit_solver.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <thread>

namespace fixq {

namespace {

std::string fnv1a(const std::string& text) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

std::string format_complex(const Complex& z) {
  std::string s = format_real(z.real());
  const double im = z.imag();
  if (im != 0.0) s += (im < 0 ? "-" : "+") + format_real(std::abs(im)) + "i";
  return s;
}

void print_matrix(std::ostream& out, const std::string& label, const Matrix& m) {
  out << label << " =";
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    out << (i ? " ; " : " [");
    for (Eigen::Index k = 0; k < m.cols(); ++k) out << (k ? ", " : "") << format_complex(m(i, k));
  }
  out << "]\n";
}

std::string join(const std::vector<int>& v, const char* sep) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? sep : "") + std::to_string(v[i]);
  return s;
}

// States as printed for people: numbered from 1 like Pi_1 ... Pi_N.
std::string join_labels(const std::vector<int>& v, const char* sep) {
  std::vector<int> shifted(v);
  for (int& j : shifted) ++j;
  return join(shifted, sep);
}

std::string join_reals(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + format_real(v[i]);
  return s;
}

double dual_value(const DualCertificate& c, double q) { return real_trace(c.z) - c.a * q; }

void print_scorecard(std::ostream& out, const Scorecard& s) {
  out << "certificate: " << (s.optimal ? "optimal" : "NOT optimal") << "\n"
      << "  Pc = " << format_real(s.pc) << ", Pe = " << format_real(s.pe)
      << ", Q = " << format_real(s.q) << " (error " << format_real(s.q_error) << ")\n"
      << "  dual value = " << format_real(s.dual_value) << "\n"
      << "  psd margins = " << join_reals(s.psd_margins) << "\n"
      << "  complementarity residuals = " << join_reals(s.complementarity_residuals) << "\n";
  if (!s.diagnostic.empty()) out << "  diagnostic: " << s.diagnostic << "\n";
}

struct Breakpoints {
  std::optional<double> q_cr;
  std::optional<double> q_u;
};

Breakpoints breakpoints(const EnsembleInput& in) {
  Breakpoints b;
  try {
    if (in.family == Family::kMirror) {
      const auto curve = mirror_curve(in.mirror.b, in.mirror.eta);
      b.q_cr = curve.q_cr;
      b.q_u = curve.q_u;
      return b;
    }
    if (in.family == Family::kPartiallySymmetric && in.symmetric.equiprobable()) {
      const auto curve = equiprobable_symmetric_curve(in.symmetric);
      b.q_cr = curve.q_cr;
      b.q_u = curve.q_u;
      return b;
    }
    b.q_u = find_Qu(in.ensemble, [&](double q) { return solve_input(in, q).pc; }).q_u;
  } catch (const Error&) {
    // Breakpoints are annotations; an ensemble without a large-Q regime
    // (rank-deficient average state) simply has none.
  }
  return b;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw Error(ErrorKind::kIo, path + ": cannot write");
  return f;
}

// Shared error handling: every command reports the message and maps the kind.
template <class F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_code::kInternal;
  }
}

}  // namespace

int exit_code_for(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::kValidation:
    case ErrorKind::kSymmetry:
    case ErrorKind::kDimension:
    case ErrorKind::kUnsupported:
    case ErrorKind::kIo:
      return exit_code::kUsage;
    case ErrorKind::kFeasibility:
      return exit_code::kNotOptimal;
    default:
      return exit_code::kInternal;
  }
}

std::string format_real(double x) {
  if (x == 0.0) return "0";  // also folds -0
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::vector<double> parse_grid(const std::string& spec) {
  auto number = [&](const std::string& s) {
    std::size_t used = 0;
    double x = 0.0;
    try {
      x = std::stod(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != s.size() || !std::isfinite(x))
      throw Error(ErrorKind::kValidation, "grid: '" + s + "' is not a number");
    return x;
  };
  std::vector<std::string> parts;
  std::stringstream ss(spec);
  for (std::string tok; std::getline(ss, tok, ':');) parts.push_back(tok);
  if (parts.size() == 1) return {number(parts[0])};
  if (parts.size() != 3) throw Error(ErrorKind::kValidation, "grid: expected start:step:end");
  const double a = number(parts[0]), step = number(parts[1]), b = number(parts[2]);
  if (!(step > 0.0)) throw Error(ErrorKind::kValidation, "grid: step must be positive");
  if (a > b) throw Error(ErrorKind::kValidation, "grid: start exceeds end");
  const auto n = static_cast<long>(std::floor((b - a) / step + 1e-9));
  if (n > 10'000'000) throw Error(ErrorKind::kValidation, "grid: too many points");
  std::vector<double> pts;
  for (long i = 0; i <= n; ++i) pts.push_back(std::min(b, a + static_cast<double>(i) * step));
  return pts;
}

Solution solve_input(const EnsembleInput& in, double q) {
  switch (in.family) {
    case Family::kPartiallySymmetric:
      return solve_partially_symmetric(in.symmetric, q).solution;
    case Family::kMirror:
      return solve_mirror_symmetric(in.mirror.b, in.mirror.eta, q).solution;
    case Family::kUmix:
      return solve_umix(in.umix.d, in.umix.eta2, q).solution;
    case Family::kGeneric:
      break;
  }
  if (in.ensemble.dim() != 2)
    throw Error(ErrorKind::kUnsupported, "dim: only d = 2 is solved for generic ensembles");
  return solve_qubit(in.ensemble, q);
}

Sweep run_sweep(const EnsembleInput& in, const std::vector<double>& grid) {
  Sweep s;
  s.spec_hash = fnv1a(in.canonical);
  const Breakpoints b = breakpoints(in);
  s.q_cr = b.q_cr;
  s.q_u = b.q_u;

  // Slope of the final branch, used for Pc_rel where 1 - Q vanishes.
  double slope = 0.0;
  try {
    slope = max_confidence(in.ensemble).a_large_q;
  } catch (const Error&) {
  }

  s.rows.resize(grid.size());
  std::vector<std::optional<Error>> failures(grid.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < grid.size(); i = next++) {
      try {
        const Solution sol = solve_input(in, grid[i]);
        SweepRow& row = s.rows[i];
        row.q = grid[i];
        row.pc = sol.pc;
        row.pc_rel = grid[i] < 1.0 ? sol.pc / (1.0 - grid[i]) : slope;
        row.regime = regime_name(sol.regime);
        row.active = sol.active;
      } catch (const Error& e) {
        failures[i] = e;
      }
    }
  };
  const unsigned n_threads = std::clamp(std::thread::hardware_concurrency(), 1u, 16u);
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < n_threads && t < grid.size(); ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (const auto& f : failures)
    if (f) throw *f;
  return s;
}

void write_sweep_csv(std::ostream& out, const Sweep& s) {
  out << "# spec_hash=" << s.spec_hash << "\n";
  out << "# Q_cr=" << (s.q_cr ? format_real(*s.q_cr) : "none") << "\n";
  out << "# Q_u=" << (s.q_u ? format_real(*s.q_u) : "none") << "\n";
  out << "Q,Pc,Pc_rel,regime,active_states\n";
  for (const auto& r : s.rows)
    out << format_real(r.q) << "," << format_real(r.pc) << "," << format_real(r.pc_rel) << ","
        << r.regime << "," << join_labels(r.active, ";") << "\n";
}

std::vector<SweepRow> read_sweep_csv(std::istream& in) {
  std::vector<SweepRow> rows;
  bool header = false;
  for (std::string line; std::getline(in, line);) {
    if (line.empty() || line[0] == '#') continue;
    if (!header) {
      if (line != "Q,Pc,Pc_rel,regime,active_states")
        throw Error(ErrorKind::kValidation, "csv: unexpected header '" + line + "'");
      header = true;
      continue;
    }
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string c; std::getline(ss, c, ',');) cells.push_back(c);
    if (cells.size() == 4 && !line.empty() && line.back() == ',') cells.emplace_back();
    if (cells.size() != 5) throw Error(ErrorKind::kValidation, "csv: expected 5 cells in '" + line + "'");
    SweepRow r;
    r.q = std::stod(cells[0]);
    r.pc = std::stod(cells[1]);
    r.pc_rel = std::stod(cells[2]);
    r.regime = cells[3];
    std::stringstream as(cells[4]);
    for (std::string idx; std::getline(as, idx, ';');)
      if (!idx.empty()) r.active.push_back(std::stoi(idx) - 1);
    rows.push_back(std::move(r));
  }
  return rows;
}

int cmd_solve(const std::string& input, double q, const CliOptions& opt, std::ostream& out,
              std::ostream& err) {
  return guarded(err, [&] {
    const EnsembleInput in = load_ensemble(input);
    const Solution sol = solve_input(in, q);
    const Scorecard card = certify(in.ensemble, sol.povm, sol.certificate, q, opt.tol);
    if (opt.json) {
      out << Json{{"solution", to_json(sol)}, {"scorecard", to_json(card)}}.dump(2) << "\n";
    } else {
      out << "Q = " << format_real(q) << "\n"
          << "Pc = " << format_real(sol.pc) << "\n"
          << "regime = " << regime_name(sol.regime) << "\n"
          << "active states = " << join_labels(sol.active, " ") << "\n";
      print_matrix(out, "Pi_0", sol.povm.pi0);
      for (std::size_t j = 0; j < sol.povm.pis.size(); ++j)
        print_matrix(out, "Pi_" + std::to_string(j + 1), sol.povm.pis[j]);
      print_matrix(out, "Z", sol.certificate.z);
      out << "a = " << format_real(sol.certificate.a) << "\n";
      print_scorecard(out, card);
    }
    return card.optimal ? exit_code::kOk : exit_code::kNotOptimal;
  });
}

int cmd_sweep(const std::string& input, const std::string& grid, const std::string& out_path,
              const CliOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const std::vector<double> pts = parse_grid(grid);
    const EnsembleInput in = load_ensemble(input);
    std::ofstream file;
    if (!out_path.empty()) file = open_output(out_path);  // fail before the work
    const Sweep s = run_sweep(in, pts);
    std::ostream& dest = out_path.empty() ? out : file;
    if (opt.json) {
      Json rows = Json::array();
      for (const auto& r : s.rows)
        rows.push_back({{"q", r.q}, {"pc", r.pc}, {"pc_rel", r.pc_rel}, {"regime", r.regime},
                        {"active_states", r.active}});
      Json doc{{"spec_hash", s.spec_hash}, {"rows", rows}};
      doc["q_cr"] = s.q_cr ? Json(*s.q_cr) : Json(nullptr);
      doc["q_u"] = s.q_u ? Json(*s.q_u) : Json(nullptr);
      dest << doc.dump(2) << "\n";
    } else {
      write_sweep_csv(dest, s);
    }
    if (!dest) throw Error(ErrorKind::kIo, (out_path.empty() ? "stdout" : out_path) + ": write failed");
    return exit_code::kOk;
  });
}

int cmd_certify(const std::string& input, const std::string& povm, const std::string& certificate,
                double q, const CliOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const EnsembleInput in = load_ensemble(input);
    const Povm m = load_povm(povm);
    const DualCertificate c = load_certificate(certificate);
    check_feasible(m, in.ensemble.dim(), in.ensemble.size(), opt.tol);
    const Scorecard card = certify(in.ensemble, m, c, q, opt.tol);
    if (opt.json)
      out << to_json(card).dump(2) << "\n";
    else
      print_scorecard(out, card);
    return card.optimal ? exit_code::kOk : exit_code::kNotOptimal;
  });
}

int cmd_compare(const std::string& input, double q, const CliOptions& opt, std::ostream& out,
                std::ostream& err) {
  return guarded(err, [&] {
    const EnsembleInput in = load_ensemble(input);
    if (in.ensemble.dim() != 2) throw Error(ErrorKind::kUnsupported, "dim: compare needs d = 2");
    opt.search.validate();
    QubitSolverOptions so;
    so.tol = opt.tol;
    const Solution sol = solve_qubit(in.ensemble, q, so);
    const OracleResult orc = brute_force(in.ensemble, q, opt.search);
    const double dual = dual_value(sol.certificate, q);
    const double gap = dual - orc.pc_lower;
    const bool ok = gap <= 5e-3 && orc.pc_lower <= dual + 1e-9;
    if (opt.json) {
      out << Json{{"pc_solver", sol.pc}, {"pc_oracle", orc.pc_lower}, {"dual_value", dual},
                  {"gap", gap}, {"oracle_source", orc.source}, {"ok", ok}}
                 .dump(2)
          << "\n";
    } else {
      out << "Pc_solver  " << format_real(sol.pc) << "\n"
          << "Pc_oracle  " << format_real(orc.pc_lower) << "  (" << orc.source << ")\n"
          << "dual       " << format_real(dual) << "\n"
          << "gap        " << format_real(gap) << "\n"
          << (ok ? "ok" : "MISMATCH") << "\n";
    }
    return ok ? exit_code::kOk : exit_code::kNotOptimal;
  });
}

int cmd_confidence(const std::string& input, const CliOptions& opt, std::ostream& out,
                   std::ostream& err) {
  return guarded(err, [&] {
    const EnsembleInput in = load_ensemble(input);
    const ConfidenceReport rep = max_confidence(in.ensemble);
    const Breakpoints b = breakpoints(in);
    if (opt.json) {
      Json doc{{"C", rep.c}, {"C_max", rep.a_large_q}, {"maximizers", rep.maximizers}};
      doc["Q_u"] = b.q_u ? Json(*b.q_u) : Json(nullptr);
      out << doc.dump(2) << "\n";
    } else {
      for (std::size_t j = 0; j < rep.c.size(); ++j)
        out << "C_" << j + 1 << " = " << format_real(rep.c[j]) << "\n";
      out << "C_max = " << format_real(rep.a_large_q) << "\n"
          << "Q_u = " << (b.q_u ? format_real(*b.q_u) : "none") << "\n";
    }
    return exit_code::kOk;
  });
}

}  // namespace fixq
