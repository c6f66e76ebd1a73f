#include "fixq/analytic.hpp"
#include "fixq/confidence.hpp"
#include "fixq/qubit_solver.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace fixq;

TEST_CASE("maximum confidence, closed cases") {
  for (int d : {2, 3, 5}) {
    const double eta2 = 0.3;
    const auto rep = max_confidence(build_umix(d, eta2));
    CHECK(rep.c[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(rep.c[1] == doctest::Approx(eta2 * d / (0.7 + eta2 * d)).epsilon(1e-12));
    CHECK(rep.a_large_q == doctest::Approx(1.0).epsilon(1e-12));
  }

  // Mirror pair: eta (r + b(1-2r)) / (r(1-r)); axis state: (1-2 eta)/r.
  const double b = 0.4, eta = 0.2, r = 2 * eta * b + 1 - 2 * eta;
  const auto m = max_confidence(build_mirror(b, eta));
  CHECK(m.c[0] == doctest::Approx(eta * (r + b * (1 - 2 * r)) / (r * (1 - r))).epsilon(1e-12));
  CHECK(m.c[1] == doctest::Approx(m.c[0]).epsilon(1e-12));
  CHECK(m.c[2] == doctest::Approx((1 - 2 * eta) / r).epsilon(1e-12));
  CHECK(m.maximizers == std::vector<int>{2});

  const auto o = max_confidence(
      Ensemble({{0.3, qubit_state(1, 0, 0)}, {0.7, qubit_state(1, std::numbers::pi, 0)}}));
  CHECK(o.c[0] == doctest::Approx(1.0));
  CHECK(o.c[1] == doctest::Approx(1.0));
}

TEST_CASE("maximum confidence of a generic mixed ensemble") {
  // Reference values from an independent eigen-solve of rho^-1/2 eta_j rho_j rho^-1/2.
  const Ensemble e({{0.5, qubit_state(0.9, 0.3, 0.1)},
                    {0.3, qubit_state(0.6, 2.0, 1.2)},
                    {0.2, (Matrix(2, 2) << 0.7, Complex(0.1, -0.2), Complex(0.1, 0.2), 0.3).finished()}});
  const auto rep = max_confidence(e);
  CHECK(rep.c[0] == doctest::Approx(0.704363506256).epsilon(1e-11));
  CHECK(rep.c[1] == doctest::Approx(0.687378313121).epsilon(1e-11));
  CHECK(rep.c[2] == doctest::Approx(0.234475777318).epsilon(1e-11));
}

TEST_CASE("rank-deficient average state has no confidence ratio") {
  const Ensemble same({{0.5, qubit_state(1, 0, 0)}, {0.5, qubit_state(1, 0, 0)}});
  try {
    max_confidence(same);
    FAIL("expected singular");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kSingular);
  }
}

TEST_CASE("large-Q line") {
  const Ensemble u = build_umix(3, 0.4);
  CHECK(large_Q_value(u, 1.0) == 0.0);
  for (double q : {0.6, 0.8, 1.0}) CHECK(large_Q_value(u, q) == doctest::Approx(1 - q));

  const double b = 0.4, eta = 0.2, r = 0.76;
  CHECK(large_Q_value(build_mirror(b, eta), 1 - r) ==
        doctest::Approx((1 - 2 * eta) / r * r).epsilon(1e-12));
}

TEST_CASE("onset of the large-Q regime") {
  for (int d : {2, 3}) {
    const double eta2 = 0.4;
    const auto qu =
        find_Qu(build_umix(d, eta2), [&](double q) { return solve_umix(d, eta2, q).solution.pc; });
    CHECK(std::abs(qu.q_u - (0.6 / d + eta2)) <= 1e-9);
  }

  const auto mq = find_Qu(build_mirror(0.4, 0.2),
                          [](double q) { return solve_mirror_symmetric(0.4, 0.2, q).solution.pc; });
  CHECK(std::abs(mq.q_u - 0.24) <= 1e-9);

  // Ten-state two-group ensemble: matches the closed-form r(1 - F_u) of the analytic curve.
  PartialSymmetrySpec s;
  s.n1 = 4;
  s.n2 = 6;
  s.b = 0.4;
  s.c = 0.8;
  s.eta = s.eta_prime = 0.1;
  const auto curve = equiprobable_symmetric_curve(s);
  const auto found = find_Qu(build_partially_symmetric(s), curve.value);
  CHECK(std::abs(found.q_u - curve.q_u) <= 1e-5);  // tangential join
}

TEST_CASE("large-Q witness and its solution") {
  const Ensemble e({{0.5, qubit_state(0.9, 0.3, 0.1)},
                    {0.3, qubit_state(0.6, 2.0, 1.2)},
                    {0.2, (Matrix(2, 2) << 0.7, Complex(0.1, -0.2), Complex(0.1, 0.2), 0.3).finished()}});
  const auto w = large_Q_witness(e);
  CHECK(w.confidence == doctest::Approx(0.704363506256).epsilon(1e-11));
  for (double q : {w.q_min, 0.5 * (1 + w.q_min), 1.0}) {
    const Solution s = large_Q_solution(e, w, q);
    const auto card = certify(e, s.povm, s.certificate, q);
    CHECK(card.optimal);
    CHECK(card.pc == doctest::Approx(w.confidence * (1 - q)).epsilon(1e-12));
  }
  // The general solver agrees on where the line is first reached.
  const auto qu = find_Qu(e, [&](double q) { return solve_qubit(e, q).pc; });
  CHECK(qu.q_u <= w.q_min + 1e-9);
}
