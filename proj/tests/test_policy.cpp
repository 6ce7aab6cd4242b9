#include <doctest.h>

#include "commute/errors.hpp"
#include "commute/policy.hpp"
#include "commute/reserved.hpp"
#include "fixtures.hpp"

using namespace commute;
using doctest::Approx;
using policy::Control;
using policy::Derivative;

TEST_CASE("optimal parking supply of the base scenario") {
  const auto p = fx::base();

  auto r = policy::optimal_parking(p, 10000);
  CHECK(r.branch_name == "M2");
  CHECK(r.argopt == Approx(59071.43).epsilon(1e-7));
  CHECK(r.TC_at_opt == Approx(2.992e6).epsilon(1e-4));
  CHECK(std::abs(r.oracle_argopt - r.argopt) <= 1.0);
  CHECK_FALSE(r.branch_mismatch);

  // Small fleet: the idle-gap branch, capped where autos match transit.
  r = policy::optimal_parking(p, 2000);
  CHECK(r.branch_name == "M4");
  CHECK(r.argopt == Approx(67214.29).epsilon(1e-6));
  CHECK_FALSE(r.branch_mismatch);

  // A fleet that takes everyone off transit leaves nothing for parking.
  r = policy::optimal_parking(p, derive(p, 0).NF5 + 10);
  CHECK(r.branch_name == "0");
  CHECK(r.argopt == 0);
}

TEST_CASE("optimal fleet size of the base scenario") {
  const auto p = fx::base();

  auto r = policy::optimal_fleet(p, 50000);
  CHECK(r.branch_name == "NF7");
  CHECK(r.argopt == Approx(18466.67).epsilon(1e-6));
  REQUIRE(r.eta);
  REQUIRE(r.TC_benchmark);
  CHECK(*r.TC_benchmark == Approx(3.795e6));
  CHECK(r.TC_at_opt == Approx(2.8717e6).epsilon(1e-4));
  CHECK(*r.eta == Approx(0.2433).epsilon(1e-3));
  CHECK_FALSE(r.branch_mismatch);

  r = policy::optimal_fleet(p, 10000);
  CHECK(r.branch_name == "NF9");
  CHECK(r.argopt == Approx(59557.14).epsilon(1e-6));
  CHECK_FALSE(r.branch_mismatch);

  r = policy::optimal_fleet(p, 68000);
  CHECK(r.branch_name == "NF8");
  CHECK(r.argopt == Approx(900).epsilon(1e-6));
  CHECK_FALSE(r.branch_mismatch);
}

TEST_CASE("closed-form derivatives match central differences") {
  const auto p = fx::base();
  const double h = 1e-2;
  for (double NC : {10000.0, 40000.0, 60000.0}) {
    for (double NF : {1000.0, 10000.0, 25000.0}) {
      CAPTURE(NC);
      CAPTURE(NF);
      const double gi_nc = (fx::tc_gap(p, NC + h, NF) - fx::tc_gap(p, NC - h, NF)) / (2 * h);
      const double gii_nc = (fx::tc_queue(p, NC + h, NF) - fx::tc_queue(p, NC - h, NF)) / (2 * h);
      const double gi_nf = (fx::tc_gap(p, NC, NF + h) - fx::tc_gap(p, NC, NF - h)) / (2 * h);
      const double gii_nf = (fx::tc_queue(p, NC, NF + h) - fx::tc_queue(p, NC, NF - h)) / (2 * h);
      const double scale = 100.0;  // derivatives are O(10); compare absolutely at this scale
      CHECK(policy::tc_derivative(p, NC, NF, Derivative::dTCi_dNC) == Approx(gi_nc).scale(scale).epsilon(1e-6));
      CHECK(policy::tc_derivative(p, NC, NF, Derivative::dTCii_dNC) == Approx(gii_nc).scale(scale).epsilon(1e-6));
      CHECK(policy::tc_derivative(p, NC, NF, Derivative::dTCi_dNF) == Approx(gi_nf).scale(scale).epsilon(1e-6));
      CHECK(policy::tc_derivative(p, NC, NF, Derivative::dTCii_dNF) == Approx(gii_nf).scale(scale).epsilon(1e-6));
    }
  }
  // With the queue branch, extra eFHVs stop paying off exactly at M6.
  const double m6 = derive(p, 10000).M6;
  CHECK(policy::tc_derivative(p, m6, 10000, Derivative::dTCii_dNF) == Approx(0).scale(100).epsilon(1e-9));

  // Both branches are convex in each control.
  for (double x : {5000.0, 30000.0, 60000.0}) {
    const double k = 1000;
    CHECK(fx::tc_gap(p, x + k, 10000) + fx::tc_gap(p, x - k, 10000) >= 2 * fx::tc_gap(p, x, 10000));
    CHECK(fx::tc_queue(p, x + k, 10000) + fx::tc_queue(p, x - k, 10000) >= 2 * fx::tc_queue(p, x, 10000));
    CHECK(fx::tc_queue(p, 50000, x + k) + fx::tc_queue(p, 50000, x - k) >= 2 * fx::tc_queue(p, 50000, x));
  }
}

TEST_CASE("grid oracle edge cases") {
  const auto p = fx::base();
  auto code = [&](double lo, double hi, double step) {
    try {
      policy::grid_oracle(p, Control::Parking, 10000, lo, hi, step);
    } catch (const ModelError& e) {
      return e.code();
    }
    return ErrorCode::VerificationFailed;
  };
  CHECK(code(0, 100, 0) == ErrorCode::ValidationError);
  CHECK(code(0, 100, -1) == ErrorCode::ValidationError);
  CHECK(code(100, 0, 1) == ErrorCode::ValidationError);

  auto g = policy::grid_oracle(p, Control::Parking, 10000, 100, 200, 1000);
  REQUIRE(g.curve.size() == 1);
  CHECK(g.argmin == 100);

  g = policy::grid_oracle(p, Control::Parking, 10000, 0, 60000, 10000);
  CHECK(g.curve.size() == 7);
  for (const auto& pt : g.curve) {
    CHECK(pt.TC == Approx(reserved::total_cost(p, pt.control, 10000)).epsilon(1e-12));
    CHECK(pt.TC >= g.min_TC);
  }
}

TEST_CASE("closed-form optima agree with the grid on random scenarios") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(0, 1);
  int checked = 0;
  for (int i = 0; i < 40; ++i) {
    const auto p = fx::random_reserved(rng);
    const auto d = derive(p, 0);
    const double NF = u(rng) * 0.6 * d.NF0;
    const double M = (0.05 + 0.9 * u(rng)) * d.NC0;
    const double step = d.NC0 / 5000;  // keep the grid small
    CAPTURE(i);
    const auto a = policy::optimal_parking(p, NF, step);
    // The optimum often sits on a kink, so compare locations, not costs.
    CHECK(std::abs(a.oracle_argopt - a.argopt) <= step * (1 + 1e-9));
    CHECK_FALSE(a.branch_mismatch);
    CHECK(a.TC_at_opt <= a.oracle_TC * (1 + 1e-9));
    const auto b = policy::optimal_fleet(p, M, step);
    CHECK_FALSE(b.branch_mismatch);
    ++checked;
  }
  CHECK(checked == 40);
}
