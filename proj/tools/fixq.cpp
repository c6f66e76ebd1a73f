// fixq: optimal state discrimination at a fixed inconclusive rate.

#include "fixq/cli.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
  using namespace fixq;
  CLI::App app{"Optimal quantum state discrimination with a fixed rate of inconclusive results"};
  app.require_subcommand(1);

  CliOptions opt;
  std::string input, povm, cert, grid, out_path;
  double q = 0.0;

  auto common = [&](CLI::App* sub, bool with_q) {
    sub->add_option("input", input, "Ensemble JSON file")->required();
    if (with_q) sub->add_option("--q", q, "Inconclusive rate Q")->check(CLI::Range(0.0, 1.0));
    sub->add_flag("--json", opt.json, "Machine-readable output");
    sub->add_option("--tol", opt.tol, "Certification tolerance")->check(CLI::PositiveNumber);
  };

  auto* solve = app.add_subcommand("solve", "Optimal measurement with certificate");
  common(solve, true);

  auto* sweep = app.add_subcommand("sweep", "Pc over a Q grid as CSV");
  common(sweep, false);
  sweep->add_option("--grid", grid, "start:step:end")->required();
  sweep->add_option("--out", out_path, "Output file (default stdout)");

  auto* certify_cmd = app.add_subcommand("certify", "Check an external POVM and dual certificate");
  common(certify_cmd, true);
  certify_cmd->add_option("povm", povm, "POVM JSON file")->required();
  certify_cmd->add_option("certificate", cert, "Certificate JSON file")->required();

  auto* compare = app.add_subcommand("compare", "Qubit solver against the brute-force oracle");
  common(compare, true);
  compare->add_option("--seed", opt.search.seed, "Oracle random seed");
  compare->add_option("--resolution", opt.search.resolution, "Oracle grid resolution");
  compare->add_option("--refinement", opt.search.refinement, "Oracle refinement rounds");

  auto* confidence = app.add_subcommand("confidence", "Maximum confidences and Q_u");
  common(confidence, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : exit_code::kUsage;
  }

  if (solve->parsed()) return cmd_solve(input, q, opt, std::cout, std::cerr);
  if (sweep->parsed()) return cmd_sweep(input, grid, out_path, opt, std::cout, std::cerr);
  if (certify_cmd->parsed()) return cmd_certify(input, povm, cert, q, opt, std::cout, std::cerr);
  if (compare->parsed()) return cmd_compare(input, q, opt, std::cout, std::cerr);
  return cmd_confidence(input, opt, std::cout, std::cerr);
}
