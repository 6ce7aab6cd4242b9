#include "commute/bimodal.hpp"

#include <cmath>
#include <limits>

#include "commute/errors.hpp"

namespace commute::bimodal {

DepartureRates departure_rates(const ScenarioParams& p, double normalizer, double eps) {
  double congestion = 1.0;
  if (eps > 0.0) {
    if (!(normalizer > 0.0)) {
      throw ModelError(ErrorCode::DivisionByZeroPopulation,
                       "search growth needs a positive auto population");
    }
    congestion += p.s * eps / normalizer;
  }
  return {p.s * p.alpha / ((p.alpha - p.beta) * congestion),
          p.s * p.alpha / ((p.alpha + p.gamma) * congestion)};
}

DepartureRates departure_rates(const ScenarioParams& p, double normalizer) {
  return departure_rates(p, normalizer, p.eps);
}

double auto_cost(const ScenarioParams& p, double NC, double eps) {
  const double bg = p.beta + p.gamma;
  return p.beta * p.gamma / bg * NC / p.s + p.alpha * p.S0 + p.beta * (p.alpha + p.gamma) / bg * eps + p.F;
}

double auto_cost(const ScenarioParams& p, double NC) { return auto_cost(p, NC, p.eps); }

ModeBlock auto_block_for_cost(const ScenarioParams& p, double P, double count, DepartureRates rates) {
  ModeBlock b;
  b.early_rate = rates.early;
  b.late_rate = rates.late;
  // First driver meets an empty queue and only searches S0.
  b.start = p.t_star - p.S0 - (P - p.alpha * p.S0 - p.F) / p.beta;
  // On-time driver: all of (P - F) is travel-time cost.
  const double on_time = p.t_star - (P - p.F) / p.alpha;
  const double early_capacity = rates.early * std::max(0.0, on_time - b.start);
  if (count <= early_capacity) {
    b.end = b.start + count / rates.early;
    b.on_time = b.end;
  } else {
    b.on_time = on_time;
    b.end = on_time + (count - early_capacity) / rates.late;
  }
  return b;
}

BimodalOutcome equilibrium(const ScenarioParams& p, double M, bool reserved) {
  if (!(M >= 0.0)) throw ModelError(ErrorCode::PrecondViolation, "M must be >= 0");
  BimodalOutcome o;
  o.reserved = reserved;
  const double eps = reserved ? 0.0 : p.eps;
  const double NC0 = virtual_parking_demand(p, eps);

  if (M >= NC0) {
    o.NC = NC0;
    o.binding = false;
    o.P_transit = commute::transit_cost(p, p.N - o.NC);
    o.P_auto = o.NC > 0.0 ? auto_cost(p, o.NC, eps) : o.P_transit;
    o.normalizer = o.NC;
  } else {
    o.NC = M;
    o.binding = true;
    o.P_transit = commute::transit_cost(p, p.N - M);
    // Without reservation drivers race for the scarce spaces until their cost
    // rises to the transit level.
    o.P_auto = reserved ? auto_cost(p, M, 0.0) : o.P_transit;
    o.normalizer = M;
  }
  o.NT = p.N - o.NC;
  o.TC = o.P_auto * o.NC + o.P_transit * o.NT;
  o.auto_deadline = std::numeric_limits<double>::infinity();

  if (o.NC > 0.0) {
    o.rates = departure_rates(p, o.normalizer, eps);
    if (eps > 0.0 && !(o.rates.early > p.s)) {
      throw ModelError(ErrorCode::PrecondViolation,
                       "search congestion too strong: early departure rate does not exceed capacity, "
                       "no bottleneck queue forms");
    }
    o.auto_block = auto_block_for_cost(p, o.P_auto, o.NC, o.rates);
    if (o.binding && !reserved) o.auto_deadline = o.auto_block->end;
  }
  return o;
}

EquilibriumOutcome to_equilibrium(const BimodalOutcome& o) {
  EquilibriumOutcome e;
  e.regime = o.reserved ? "bimodal-reserved" : "bimodal";
  e.label = o.binding ? "binding" : "unconstrained";
  e.NC = o.NC;
  e.NF = 0.0;
  e.NT = o.NT;
  e.cost_auto = o.P_auto;
  e.cost_efhv = o.P_transit;
  e.cost_transit = o.P_transit;
  e.TC = o.TC;
  e.auto_block = o.auto_block;
  e.search_normalizer = o.normalizer;
  e.reserved_autos = o.reserved;
  e.auto_deadline = o.auto_deadline;
  // No eFHV service in this regime.
  e.efhv_deadline = -std::numeric_limits<double>::infinity();
  return e;
}

}  // namespace commute::bimodal
