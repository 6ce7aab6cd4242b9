#include <doctest.h>

#include <sstream>

#include "commute/errors.hpp"
#include "commute/reserved.hpp"
#include "commute/sim.hpp"
#include "fixtures.hpp"

using namespace commute;
using doctest::Approx;
using sim::DepartureProfile;
using sim::Mode;
using sim::Segment;

namespace {

DepartureProfile autos_only(std::vector<Segment> segs, double nc) {
  DepartureProfile d;
  d.segments = std::move(segs);
  d.NC = nc;
  d.search_normalizer = nc;
  d.reserved_autos = true;
  return d;
}

ErrorCode validate_code(const DepartureProfile& d) {
  try {
    d.validate();
  } catch (const ModelError& e) {
    return e.code();
  }
  return ErrorCode::VerificationFailed;
}

}  // namespace

TEST_CASE("a single overloaded burst builds and drains a queue") {
  const auto p = fx::base();  // s = 200
  const auto tr = sim::simulate(p, autos_only({{0, 10, 300, 0}}, 3000));
  CHECK(tr.queue(-1) == 0);
  CHECK(tr.queue(5) == Approx(500));
  CHECK(tr.queue(10) == Approx(1000));
  CHECK(tr.queue(12.5) == Approx(500));
  CHECK(tr.queue(15) == Approx(0).scale(1));
  CHECK(tr.queue(20) == 0);
  CHECK(tr.at(20).cum_exit() == Approx(3000));
  CHECK(tr.travel_time(10) == Approx(5));
  CHECK(tr.travel_time(0) == 0);
  const auto z = tr.queue_zero_intervals();
  CHECK(z.empty());
}

TEST_CASE("first in, first out: a departure at t exits when cumulative exits reach its rank") {
  const auto p = fx::base();
  const auto tr = sim::simulate(p, autos_only({{0, 6, 350, 0}, {6, 20, 120, 0}}, 350 * 6 + 120 * 14));
  for (double t = 0.25; t < 20; t += 0.5) {
    CAPTURE(t);
    const auto a = tr.at(t);
    const double exit_t = t + tr.travel_time(t);
    CHECK(tr.at(exit_t).cum_exit() == Approx(a.cum_auto + a.cum_efhv).epsilon(1e-9));
  }
}

TEST_CASE("gaps carry no departures and let the queue clear") {
  const auto p = fx::base();
  const auto tr = sim::simulate(p, autos_only({{0, 10, 300, 0}, {30, 40, 300, 0}}, 6000));
  CHECK(tr.queue(20) == 0);
  CHECK(tr.at(20).cum_auto == Approx(3000));
  const auto z = tr.queue_zero_intervals();
  REQUIRE(z.size() == 1);
  CHECK(z[0].first == Approx(15));
  CHECK(z[0].second == Approx(30));
}

TEST_CASE("an empty profile leaves the road free") {
  const auto p = fx::base();
  DepartureProfile d;
  const auto tr = sim::simulate(p, d);
  CHECK(tr.queue(540) == 0);
  // An eFHV arriving exactly on time pays only the fare.
  CHECK(sim::realized_cost(tr, Mode::Efhv, p.t_star) == Approx(p.W));
  // A reserved auto pays the base search time, arriving S0 late.
  auto tr2 = tr;
  tr2.reserved_autos = true;
  CHECK(sim::realized_cost(tr2, Mode::Auto, p.t_star) == Approx(p.alpha * p.S0 + p.gamma * p.S0 + p.F));
  CHECK(sim::realized_cost(tr2, Mode::Auto, p.t_star - p.S0 - 10) ==
        Approx(p.alpha * p.S0 + p.beta * 10 + p.F));
}

TEST_CASE("refining the profile does not change the trajectory") {
  const auto p = fx::base();
  for (auto [M, NF] : {std::pair{50000.0, 10000.0}, {68643.0, 10000.0}, {30000.0, 60000.0}}) {
    const auto prof = sim::build_profile(reserved::to_equilibrium(reserved::solve(p, M, NF)));
    const auto a = sim::simulate(p, prof);
    const auto b = sim::simulate(p, sim::refine(sim::refine(prof)));
    CHECK(sim::refine(prof).segments.size() == 2 * prof.segments.size());
    for (double t = 100; t < 700; t += 0.37) {
      const auto x = a.at(t), y = b.at(t);
      CHECK(y.queue == Approx(x.queue).scale(1).epsilon(1e-9));
      CHECK(y.cum_auto == Approx(x.cum_auto).scale(1).epsilon(1e-9));
    }
  }
}

TEST_CASE("conservation and non-negativity on a solved equilibrium") {
  const auto p = fx::base();
  const auto eq = reserved::to_equilibrium(reserved::solve(p, 68643, 10000));
  const auto rep = sim::verify(p, eq);
  CHECK(rep.pass);
  CHECK(rep.entry_error <= 1e-9 * p.N);
  CHECK(rep.exit_error <= 1e-9 * p.N);
  CHECK(rep.min_queue >= -1e-9);
  REQUIRE(rep.reserved_not_dearer);
  CHECK(*rep.reserved_not_dearer);
  CHECK(rep.probes >= 2000);
  CHECK(rep.min_margin_rel >= -1e-6);
}

TEST_CASE("a profile shifted by five minutes is not an equilibrium") {
  const auto p = fx::base();
  const auto eq = reserved::to_equilibrium(reserved::solve(p, 50000, 10000));
  auto prof = sim::build_profile(eq);
  REQUIRE(sim::verify(p, eq, prof).pass);
  for (auto& s : prof.segments) {
    s.start += 5;
    s.end += 5;
  }
  const auto rep = sim::verify(p, eq, prof);
  CHECK_FALSE(rep.pass);
  CHECK_FALSE(rep.failures.empty());
}

TEST_CASE("malformed profiles are rejected") {
  CHECK(validate_code(autos_only({{0, 10, 100, 0}, {5, 15, 100, 0}}, 2000)) == ErrorCode::InconsistentOutcome);
  CHECK(validate_code(autos_only({{0, 10, -100, 0}}, -1000)) == ErrorCode::InconsistentOutcome);
  CHECK(validate_code(autos_only({{0, 10, 100, 0}}, 999)) == ErrorCode::InconsistentOutcome);
  auto mixed = autos_only({{0, 10, 100, 50}}, 1000);
  mixed.NF = 500;
  CHECK(validate_code(mixed) == ErrorCode::InconsistentOutcome);
  CHECK(validate_code(autos_only({{0, 10, 100, 0}}, 1000)) == ErrorCode::VerificationFailed);  // valid

  // An outcome whose block does not carry its declared count.
  auto eq = reserved::to_equilibrium(reserved::solve(fx::base(), 50000, 10000));
  eq.NC *= 1.01;
  CHECK_THROWS_AS(sim::build_profile(eq), ModelError);
}

TEST_CASE("trace CSV") {
  const auto p = fx::base();
  const auto tr = sim::simulate(p, autos_only({{0, 10, 300, 0}}, 3000));
  std::ostringstream os;
  sim::write_trace_csv(os, tr);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  CHECK(line == "# commute-trace v1");
  std::getline(is, line);
  CHECK(line == "t,cum_entry_auto,cum_entry_efhv,cum_exit,queue");
  int rows = 0;
  while (std::getline(is, line)) ++rows;
  CHECK(rows == static_cast<int>(tr.points.size()));
}
