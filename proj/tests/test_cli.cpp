#include "fixq/analytic.hpp"
#include "fixq/cli.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace fixq;

namespace {

std::string data(const std::string& name) { return std::string(FIXQ_TEST_DATA) + "/" + name; }

struct Run {
  int code;
  std::string out, err;
};

template <class F>
Run run(F&& f) {
  std::ostringstream out, err;
  const int code = f(out, err);
  return {code, out.str(), err.str()};
}

Run solve(const std::string& file, double q, bool json = false) {
  CliOptions opt;
  opt.json = json;
  return run([&](auto& o, auto& e) { return cmd_solve(data(file), q, opt, o, e); });
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("fixq_test_" + name);
}

}  // namespace

TEST_CASE("number formatting") {
  CHECK(format_real(0.0) == "0");
  CHECK(format_real(-0.0) == "0");
  CHECK(format_real(0.2) == "0.2");
  CHECK(format_real(2.0 / 3.0) == "0.666666666667");
  CHECK(format_real(1e-20) == "1e-20");
  CHECK(std::stod(format_real(M_PI)) == doctest::Approx(M_PI).epsilon(1e-12));
}

TEST_CASE("grid specifications") {
  CHECK(parse_grid("0.25") == std::vector<double>{0.25});
  auto g = parse_grid("0:0.01:1");
  CHECK(g.size() == 101);
  CHECK(g.front() == 0.0);
  CHECK(g.back() == 1.0);
  CHECK(parse_grid("0:0.3:1").size() == 4);
  for (const char* bad : {"1:0.1:0", "0:0:1", "0:-1:1", "a:0.1:1", "0:0.1", "0:0.1:1:2", ""}) {
    INFO(bad);
    CHECK_THROWS_AS(parse_grid(bad), Error);
  }
}

TEST_CASE("solve command") {
  auto r = solve("mirror.json", 0.0);
  CHECK(r.code == exit_code::kOk);
  CHECK(r.out.find("Pc = 0.738461538462") != std::string::npos);
  CHECK(r.out.find("regime = ALL_GROUPS") != std::string::npos);
  CHECK(r.out.find("certificate: optimal") != std::string::npos);

  r = solve("umix.json", 0.1, true);
  CHECK(r.code == exit_code::kOk);
  const Json doc = Json::parse(r.out);
  CHECK(doc["solution"]["pc"].get<double>() == doctest::Approx(0.7583333333).epsilon(1e-9));
  CHECK(doc["scorecard"]["optimal"].get<bool>());
  CHECK(doc["solution"]["povm"]["pis"].size() == 2);

  r = solve("mixed3.json", 1.0);
  CHECK(r.code == exit_code::kOk);
  CHECK(r.out.find("Pc = 0\n") != std::string::npos);
}

TEST_CASE("solve command errors") {
  auto r = solve("bad_key.json", 0.0);
  CHECK(r.code == exit_code::kUsage);
  CHECK(r.err.find("mirror.colour") != std::string::npos);
  CHECK(solve("qutrit_generic.json", 0.0).code == exit_code::kUsage);
  CHECK(solve("does_not_exist.json", 0.0).code == exit_code::kUsage);
  CHECK(solve("helstrom.json", 1.5).code == exit_code::kUsage);
}

TEST_CASE("sweep writes a plottable CSV") {
  const auto path = temp_file("two_groups.csv");
  const auto r = run([&](auto& o, auto& e) { return cmd_sweep(data("two_groups_4_6.json"), "0:0.01:1", path.string(), {}, o, e); });
  REQUIRE(r.code == exit_code::kOk);
  std::ifstream in(path);
  std::stringstream text;
  text << in.rdbuf();
  CHECK(text.str().rfind("# spec_hash=", 0) == 0);
  CHECK(text.str().find("# Q_cr=0.213333333333") != std::string::npos);
  CHECK(text.str().find("Q,Pc,Pc_rel,regime,active_states") != std::string::npos);

  std::istringstream again(text.str());
  const auto rows = read_sweep_csv(again);
  REQUIRE(rows.size() == 101);
  const double c = rows.back().pc_rel;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& row = rows[i];
    // Written values round trip at 12 significant digits.
    CHECK(std::abs(row.pc_rel * (1 - row.q) - row.pc) <= 1e-11);
    if (i) CHECK(row.pc_rel >= rows[i - 1].pc_rel - 1e-8);
    if (row.regime == "LARGE_Q") CHECK(row.pc_rel == doctest::Approx(c).epsilon(1e-11));
  }
  CHECK(rows.front().pc == doctest::Approx(0.2));
  // States are numbered from 1 in the file and from 0 once read back.
  CHECK(text.str().find(",ALL_GROUPS,1;2;3;4;5;6;7;8;9;10\n") != std::string::npos);
  CHECK(rows.front().active == std::vector<int>{0, 1, 2, 3, 4, 5, 6, 7, 8, 9});
  std::filesystem::remove(path);
}

TEST_CASE("sweep breakpoints and single points") {
  auto r = run([&](auto& o, auto& e) { return cmd_sweep(data("mirror_034.json"), "0:0.05:1", "", {}, o, e); });
  REQUIRE(r.code == exit_code::kOk);
  const auto curve = mirror_curve(0.4, 0.34);
  REQUIRE(curve.q_cr);
  CHECK(r.out.find("# Q_cr=" + format_real(*curve.q_cr)) != std::string::npos);
  CHECK(r.out.find("# Q_u=" + format_real(curve.q_u)) != std::string::npos);
  CHECK(*curve.q_cr < curve.q_u);

  r = run([&](auto& o, auto& e) { return cmd_sweep(data("mixed3.json"), "0.3", "", {}, o, e); });
  REQUIRE(r.code == exit_code::kOk);
  std::istringstream in(r.out);
  CHECK(read_sweep_csv(in).size() == 1);
  CHECK(r.out.find("# Q_cr=none") != std::string::npos);

  CliOptions json;
  json.json = true;
  r = run([&](auto& o, auto& e) { return cmd_sweep(data("umix.json"), "0:0.5:1", "", json, o, e); });
  const Json doc = Json::parse(r.out);
  CHECK(doc["rows"].size() == 3);
  CHECK(doc["q_u"].get<double>() == doctest::Approx(0.5 / 3 + 0.5).epsilon(1e-9));
}

TEST_CASE("sweep errors") {
  auto r = run([&](auto& o, auto& e) {
    return cmd_sweep(data("mirror.json"), "0:0.1:1", "/nonexistent/dir/out.csv", {}, o, e);
  });
  CHECK(r.code == exit_code::kUsage);
  CHECK(r.err.find("cannot write") != std::string::npos);
  r = run([&](auto& o, auto& e) { return cmd_sweep(data("mirror.json"), "1:0.1:0", "", {}, o, e); });
  CHECK(r.code == exit_code::kUsage);
}

TEST_CASE("certify command") {
  // Produce a solution, write its parts, and feed them back.
  const auto sol = Json::parse(solve("helstrom.json", 0.2, true).out)["solution"];
  const auto povm = temp_file("povm.json"), cert = temp_file("cert.json");
  std::ofstream(povm) << sol["povm"].dump();
  std::ofstream(cert) << sol["certificate"].dump();

  auto go = [&](const std::string& p, const std::string& c, double q) {
    return run([&](auto& o, auto& e) { return cmd_certify(data("helstrom.json"), p, c, q, {}, o, e); });
  };
  auto r = go(povm.string(), cert.string(), 0.2);
  CHECK(r.code == exit_code::kOk);
  CHECK(r.out.find("certificate: optimal") != std::string::npos);

  r = go(povm.string(), cert.string(), 0.3);
  CHECK(r.code == exit_code::kNotOptimal);
  CHECK(r.out.find("inconclusive rate") != std::string::npos);

  r = go(povm.string(), data("cert_helstrom_bad.json"), 0.2);
  CHECK(r.code == exit_code::kNotOptimal);

  r = go(data("povm_infeasible.json"), cert.string(), 0.0);
  CHECK(r.code == exit_code::kNotOptimal);
  CHECK(r.err.find("completeness") != std::string::npos);

  std::filesystem::remove(povm);
  std::filesystem::remove(cert);
}

TEST_CASE("compare and confidence commands") {
  CliOptions opt;
  auto r = run([&](auto& o, auto& e) { return cmd_compare(data("helstrom.json"), 0.0, opt, o, e); });
  CHECK(r.code == exit_code::kOk);
  CHECK(r.out.find("Pc_solver  0.853553390593") != std::string::npos);

  r = run([&](auto& o, auto& e) { return cmd_compare(data("umix.json"), 0.0, opt, o, e); });
  CHECK(r.code == exit_code::kUsage);
  CHECK(r.err.find("d = 2") != std::string::npos);

  r = run([&](auto& o, auto& e) { return cmd_confidence(data("mirror.json"), opt, o, e); });
  CHECK(r.code == exit_code::kOk);
  CHECK(r.out.find("C_3 = 0.789473684211") != std::string::npos);
  CHECK(r.out.find("Q_u = 0.24") != std::string::npos);
}
