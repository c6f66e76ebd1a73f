#include "fixq/analytic.hpp"
#include "fixq/confidence.hpp"

#include <doctest.h>

#include <cmath>

using namespace fixq;

namespace {

bool certified(const Ensemble& e, const Solution& s) {
  return certify(e, s.povm, s.certificate, s.q).optimal;
}

PartialSymmetrySpec two_groups(int n1, int n2) {
  PartialSymmetrySpec s;
  s.n1 = n1;
  s.n2 = n2;
  s.b = 0.4;
  s.c = 0.8;
  s.eta = s.eta_prime = 1.0 / (n1 + n2);
  return s;
}

PartialSymmetrySpec single_group(int n, double b = 0.5) {
  PartialSymmetrySpec s;
  s.n1 = n;
  s.b = b;
  s.eta = 1.0 / n;
  return s;
}

}  // namespace

TEST_CASE("uniformly mixed against pure qudit state") {
  const auto u = solve_umix(2, 0.5, 0.0);
  CHECK(u.solution.pc == doctest::Approx(0.75).epsilon(1e-14));
  CHECK(certified(build_umix(2, 0.5), u.solution));

  // Reference from a generic SDP solve.
  CHECK(solve_umix(3, 0.5, 0.1).solution.pc == doctest::Approx(0.7583333333).epsilon(1e-9));

  for (int d : {2, 3, 5}) {
    const double eta2 = 0.35, qu = 0.65 / d + eta2;
    const Solution s = solve_umix(d, eta2, qu).solution;
    CHECK(s.pc == doctest::Approx(1 - qu).epsilon(1e-12));
    CHECK((s.povm.pi0 * s.povm.pi0 - s.povm.pi0).norm() < 1e-12);  // projective
    CHECK(certified(build_umix(d, eta2), s));
  }
}

TEST_CASE("uniformly mixed state: two optimal measurements at the tie") {
  for (int d : {2, 3, 5}) {
    const double eta2 = 1.0 / (d + 1);
    const auto u = solve_umix(d, eta2, 0.0);
    REQUIRE(u.alternate.has_value());
    const Ensemble e = build_umix(d, eta2);
    CHECK(certified(e, u.solution));
    CHECK(certified(e, *u.alternate));
    CHECK(u.solution.pc == doctest::Approx(1 - eta2).epsilon(1e-12));
    CHECK(u.alternate->pc == doctest::Approx(u.solution.pc).epsilon(1e-12));
  }
  CHECK_FALSE(solve_umix(3, 0.5, 0.0).alternate.has_value());
}

TEST_CASE("equal priors and purities") {
  const Ensemble trine = build_partially_symmetric(single_group(3));
  auto s = solve_equiprobable(trine, 0.0);
  REQUIRE(s);
  CHECK(s->pc == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  s = solve_equiprobable(trine, 0.3);
  REQUIRE(s);
  CHECK(s->pc == doctest::Approx(2.0 / 3.0 * 0.7).epsilon(1e-14));
  CHECK(certified(trine, *s));

  // Past the critical rate one group would need negative weight.
  const auto spec = two_groups(4, 6);
  const double r = spec.r(), qcr = r * (1 - 2 * spec.b) / (1 - spec.b);
  const Ensemble two = build_partially_symmetric(spec);
  CHECK(solve_equiprobable(two, qcr - 1e-3).has_value());
  CHECK_FALSE(solve_equiprobable(two, qcr + 1e-3).has_value());

  // Unequal priors are not this family.
  CHECK_FALSE(solve_equiprobable(build_mirror(0.4, 0.2), 0.0).has_value());
}

TEST_CASE("two-group family solutions") {
  const auto spec = two_groups(4, 6);
  const Ensemble e = build_partially_symmetric(spec);

  auto s0 = solve_partially_symmetric(spec, 0.0);
  CHECK(s0.solution.pc == doctest::Approx(0.2).epsilon(1e-13));
  CHECK(s0.solution.regime == Regime::kAllGroups);
  CHECK(certified(e, s0.solution));

  // Between the critical rate and the large-Q onset only the first group is guessed.
  const double q = 0.3, r = spec.r(), b = spec.b, eta = spec.eta;
  const double expected = eta * (1 - (b / r) * q + 2 * std::sqrt(b * (1 - b)) * std::sqrt(1 - q / r));
  auto s1 = solve_partially_symmetric(spec, q);
  CHECK(s1.solution.regime == Regime::kGroup1Only);
  CHECK(s1.solution.pc == doctest::Approx(expected).epsilon(1e-12));
  CHECK(s1.solution.pc == doctest::Approx(0.1526642843).epsilon(1e-9));  // SDP reference
  CHECK(certified(e, s1.solution));
  CHECK(s1.solution.active == std::vector<int>{0, 1, 2, 3});

  auto s2 = solve_partially_symmetric(spec, 0.8);
  CHECK(s2.solution.regime == Regime::kLargeQ);
  CHECK(certified(e, s2.solution));

  // (8,2): SDP reference.
  const auto spec82 = two_groups(8, 2);
  const auto s82 = solve_partially_symmetric(spec82, 0.1);
  CHECK(s82.solution.pc == doctest::Approx(0.1807692308).epsilon(1e-9));
  CHECK(certified(build_partially_symmetric(spec82), s82.solution));
}

TEST_CASE("sparse weight splits reproduce the symmetric optimum") {
  for (int n : {4, 5, 6, 7}) {
    const auto spec = single_group(n);
    const Ensemble e = build_partially_symmetric(spec);
    const auto sym = solve_partially_symmetric(spec, 0.0, WeightSplit::kSymmetric);
    const auto sparse = solve_partially_symmetric(spec, 0.0, WeightSplit::kSparse);
    CHECK(certified(e, sparse.solution));
    CHECK(sparse.solution.pc == doctest::Approx(sym.solution.pc).epsilon(1e-12));
    CHECK(static_cast<int>(sparse.solution.active.size()) == (n % 2 == 0 ? 2 : 3));
  }
  const auto even = split_weights(6, 2.0, WeightSplit::kSparse);
  CHECK(even[0] == doctest::Approx(1.0));
  CHECK(even[3] == doctest::Approx(1.0));
  const auto odd = split_weights(5, 2.0, WeightSplit::kSparse);
  double total = 0;
  for (double w : odd) total += w;
  CHECK(total == doctest::Approx(2.0));
  CHECK(split_weights(4, 2.0, WeightSplit::kSymmetric)[2] == doctest::Approx(0.5));
}

TEST_CASE("mirror-symmetric states") {
  const double b = 0.4;
  // Both-group branch at Q = 0.
  const double eta = 0.2;
  const auto lo = solve_mirror_symmetric(b, eta, 0.0);
  CHECK(lo.solution.pc ==
        doctest::Approx((1 - 2 * eta) * (1 - eta * (1 + 2 * b)) / (1 - eta * (2 + b))).epsilon(1e-13));
  CHECK(lo.solution.regime == Regime::kAllGroups);

  // Beyond the critical prior the axis state is never guessed.
  const double eta_hi = 0.45;
  REQUIRE(eta_hi > mirror_constants(b, eta_hi).eta_cr);
  const auto hi = solve_mirror_symmetric(b, eta_hi, 0.0);
  CHECK(hi.solution.pc == doctest::Approx(eta_hi * (1 + 2 * std::sqrt(b * (1 - b)))).epsilon(1e-13));
  CHECK(hi.solution.regime == Regime::kGroup1Only);
  CHECK(certified(build_mirror(b, eta_hi), hi.solution));

  // SDP references.
  CHECK(solve_mirror_symmetric(b, 0.2, 0.3).solution.pc == doctest::Approx(0.5526315789).epsilon(1e-9));
  CHECK(solve_mirror_symmetric(b, 0.34, 0.1).solution.pc == doctest::Approx(0.6207285546).epsilon(1e-9));
  CHECK(solve_mirror_symmetric(b, 0.45, 0.2).solution.pc == doctest::Approx(0.7130434783).epsilon(1e-9));

  const auto eq = mirror_constants(b, 1 / 3.6);
  CHECK(eq.eta0 == doctest::Approx(1 / 3.6).epsilon(1e-14));
  CHECK(eq.C == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(eq.C_prime == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("piecewise curves are continuous and monotone") {
  auto check_curve = [](const PiecewiseSolution& c) {
    for (double q : c.breakpoints) {
      CHECK(std::abs(c.value(q - 1e-10) - c.value(q + 1e-10)) <= 1e-9);
    }
    double prev = c.value(0.0), prev_rel = prev;
    for (int i = 1; i <= 400; ++i) {
      const double q = i / 400.0, v = c.value(q);
      CHECK(v <= prev + 1e-12);
      if (q < 1.0) {
        CHECK(v / (1 - q) >= prev_rel - 1e-12);
        prev_rel = v / (1 - q);
      }
      prev = v;
    }
    CHECK(c.value(1.0) == doctest::Approx(0.0));
    CHECK(c.value(c.q_u + 0.5 * (1 - c.q_u)) ==
          doctest::Approx(c.confidence * 0.5 * (1 - c.q_u)).epsilon(1e-12));
  };
  for (auto [n1, n2] : {std::pair{4, 6}, {6, 4}, {8, 2}, {2, 8}}) {
    INFO("split " << n1 << "," << n2);
    check_curve(equiprobable_symmetric_curve(two_groups(n1, n2)));
  }
  for (double eta : {0.2, 0.2778, 0.34, 0.45}) {
    INFO("eta " << eta);
    check_curve(mirror_curve(0.4, eta));
  }

  const auto c46 = equiprobable_symmetric_curve(two_groups(4, 6));
  REQUIRE(c46.q_cr);
  CHECK(*c46.q_cr == doctest::Approx(0.64 * 0.2 / 0.6).epsilon(1e-14));
  CHECK(c46.regime_at(0.1) == Regime::kAllGroups);
  CHECK(c46.regime_at(0.3) == Regime::kGroup1Only);
  CHECK(c46.regime_at(0.9) == Regime::kLargeQ);
  CHECK(c46.confidence == doctest::Approx(max_confidence(build_partially_symmetric(two_groups(4, 6))).a_large_q));
}

TEST_CASE("curves agree with the pointwise solvers") {
  const auto spec = two_groups(6, 4);
  const auto curve = equiprobable_symmetric_curve(spec);
  for (double q : {0.0, 0.15, 0.35, 0.5, 0.7, 1.0})
    CHECK(curve.value(q) == doctest::Approx(solve_partially_symmetric(spec, q).solution.pc).epsilon(1e-10));

  const auto mc = mirror_curve(0.4, 0.34);
  for (double q : {0.0, 0.1, 0.2, 0.3, 0.45, 0.9})
    CHECK(mc.value(q) == doctest::Approx(solve_mirror_symmetric(0.4, 0.34, q).solution.pc).epsilon(1e-10));
}
