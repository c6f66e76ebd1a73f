#pragma once

// Command implementations behind the fixq executable. Argument parsing lives
// in the tool; everything here writes to caller-supplied streams and returns
// an exit code so it can be driven from tests.

#include "fixq/ensemble_io.hpp"
#include "fixq/oracle.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace fixq {

namespace exit_code {
inline constexpr int kOk = 0;
inline constexpr int kUsage = 1;          // bad arguments, unreadable or invalid input
inline constexpr int kNotOptimal = 2;     // infeasible POVM or failed certificate
inline constexpr int kInternal = 3;
}  // namespace exit_code

/// Exit code for an error escaping a command.
int exit_code_for(const Error& e);

/// 12 significant digits, shortest form.
std::string format_real(double x);

/// "a:step:b", or a single number for a one-point grid. The end point is
/// included when it lies within step * 1e-9 of the last step.
std::vector<double> parse_grid(const std::string& spec);

/// Picks the closed-form solver for structured families, the general qubit
/// solver otherwise. Throws kUnsupported for a generic ensemble with d > 2.
Solution solve_input(const EnsembleInput& in, double q);

struct SweepRow {
  double q = 0.0;
  double pc = 0.0;
  double pc_rel = 0.0;  // pc / (1 - q); at q = 1 the large-Q slope
  std::string regime;
  std::vector<int> active;  // 0-based; the CSV numbers states from 1
};

struct Sweep {
  std::string spec_hash;  // FNV-1a of the canonical input document
  std::optional<double> q_cr;
  std::optional<double> q_u;
  std::vector<SweepRow> rows;
};

/// Points are solved concurrently; rows come back in grid order.
Sweep run_sweep(const EnsembleInput& in, const std::vector<double>& grid);

void write_sweep_csv(std::ostream& out, const Sweep& s);
/// Reads back what write_sweep_csv produced (comment lines are skipped).
std::vector<SweepRow> read_sweep_csv(std::istream& in);

struct CliOptions {
  bool json = false;
  double tol = kCertifyTol;
  SearchConfig search;
};

int cmd_solve(const std::string& input, double q, const CliOptions& opt, std::ostream& out,
              std::ostream& err);
int cmd_sweep(const std::string& input, const std::string& grid, const std::string& out_path,
              const CliOptions& opt, std::ostream& out, std::ostream& err);
int cmd_certify(const std::string& input, const std::string& povm, const std::string& certificate,
                double q, const CliOptions& opt, std::ostream& out, std::ostream& err);
int cmd_compare(const std::string& input, double q, const CliOptions& opt, std::ostream& out,
                std::ostream& err);
int cmd_confidence(const std::string& input, const CliOptions& opt, std::ostream& out,
                   std::ostream& err);

}  // namespace fixq
