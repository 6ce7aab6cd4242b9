#include "commute/policy.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "commute/errors.hpp"

namespace commute::policy {

namespace {

void check_policy_preconditions(const ScenarioParams& p) {
  validate(p);
  const double W0 = (p.alpha - p.beta) * p.S0 + p.F;
  if (!(p.W <= W0)) throw ModelError(ErrorCode::PrecondViolation, "W <= W0 required");
  if (p.eps != 0.0) throw ModelError(ErrorCode::PrecondViolation, "eps == 0 required");
}

PolicyResult pick(double argopt, int branch, std::string name) {
  PolicyResult r;
  r.argopt = argopt;
  r.branch = branch;
  r.branch_name = std::move(name);
  return r;
}

void attach_oracle(PolicyResult& r, const GridResult& g, double step) {
  r.grid_step = step;
  r.oracle_argopt = g.argmin;
  r.oracle_TC = g.min_TC;
  r.oracle_gap = std::abs(r.argopt - g.argmin);
  r.branch_mismatch = r.oracle_gap > step;
}

}  // namespace

GridResult grid_oracle(const ScenarioParams& p, Control control, double fixed, double lo, double hi,
                       double step, bool idle_free_only) {
  if (!(step > 0.0) || !std::isfinite(step)) {
    throw ModelError(ErrorCode::ValidationError, "grid step must be > 0");
  }
  if (!(hi >= lo)) throw ModelError(ErrorCode::ValidationError, "grid upper bound below lower bound");

  const auto count = static_cast<long>(std::floor((hi - lo) / step)) + 1;
  GridResult out;
  out.curve.reserve(static_cast<std::size_t>(count));
  bool found = false;
  for (long k = 0; k < count; ++k) {
    const double x = lo + static_cast<double>(k) * step;
    const double M = control == Control::Parking ? x : fixed;
    const double NF = control == Control::Parking ? fixed : x;
    const reserved::ReservedOutcome o = reserved::solve(p, M, NF);
    GridPoint gp{x, o.NC, o.NT, o.costs.Pr, o.costs.Pf, o.TC, o.classification.cost_case, o.NC >= o.M};
    out.curve.push_back(gp);
    if (idle_free_only && !gp.idle_free) continue;
    if (!found || gp.TC < out.min_TC) {
      out.min_TC = gp.TC;
      out.argmin = x;
      found = true;
    }
  }
  if (!found) throw ModelError(ErrorCode::ValidationError, "no admissible grid point");
  return out;
}

PolicyResult optimal_parking(const ScenarioParams& p, double NF, double oracle_step) {
  check_policy_preconditions(p);
  const double nf0 = virtual_efhv_demand_raw(p);
  if (!(NF >= 0.0 && NF < nf0)) throw ModelError(ErrorCode::PrecondViolation, "0 <= NF < NF0 required");

  const DerivedConstants d = derive(p, NF);
  PolicyResult r;
  if (NF <= d.NF4 && NF <= d.NF1) {
    r = pick(std::min(d.M1, d.M4), 1, "min{M1,M4}");
  } else if (NF <= d.NF4 && NF > d.NF1 && NF <= d.NF3) {
    r = pick(d.M4, 2, "M4");
  } else if (NF <= d.NF4 && NF > d.NF3 && NF <= d.NF2) {
    r = pick(d.M2, 3, "M2");
  } else if (NF <= d.NF6 && NF > d.NF3 && NF > d.NF2) {
    r = pick(d.M3, 4, "M3");
  } else if (NF <= d.NF5 && NF > d.NF6 && NF > d.NF3) {
    r = pick(d.M5, 5, "M5");
  } else {
    r = pick(0.0, 6, "0");
  }
  const double nc0 = virtual_parking_demand(p, 0.0);
  r.argopt = std::clamp(r.argopt, 0.0, nc0);
  r.TC_at_opt = reserved::total_cost(p, r.argopt, NF);
  attach_oracle(r, grid_oracle(p, Control::Parking, NF, 0.0, nc0, oracle_step), oracle_step);
  return r;
}

PolicyResult optimal_fleet(const ScenarioParams& p, double M, double oracle_step) {
  check_policy_preconditions(p);
  if (!(M >= 0.0)) throw ModelError(ErrorCode::PrecondViolation, "M >= 0 required");
  const double nc0 = virtual_parking_demand(p, 0.0);
  const double Meff = std::min(M, nc0);
  const DerivedConstants d = derive(p, 0.0, Meff);

  PolicyResult r;
  if (Meff > d.M7) {
    r = pick(*d.NF8, 1, "NF8");
  } else if (Meff > d.M6) {
    r = pick(*d.NF7, 2, "NF7");
  } else {
    r = pick(*d.NF9, 3, "NF9");
  }
  const double nf0 = virtual_efhv_demand_raw(p);
  r.argopt = std::clamp(r.argopt, 0.0, nf0);
  r.TC_at_opt = reserved::total_cost(p, Meff, r.argopt);
  r.TC_benchmark = reserved::total_cost(p, Meff, 0.0);
  r.eta = (*r.TC_benchmark - r.TC_at_opt) / *r.TC_benchmark;
  attach_oracle(r, grid_oracle(p, Control::Fleet, Meff, 0.0, nf0, oracle_step, true), oracle_step);
  return r;
}

double tc_derivative(const ScenarioParams& p, double NC, double NF, Derivative which) {
  const double a = p.alpha, b = p.beta, g = p.gamma, s = p.s, th = p.theta, N = p.N;
  switch (which) {
    case Derivative::dTCi_dNC:
      return 2.0 * (b * g / ((b + g) * s) + th) * NC + p.F - p.R + a * p.S0 + th * NF - 2.0 * th * N;
    case Derivative::dTCii_dNC:
      return 2.0 * composite_c(p) / (b * s) * NC + p.F - p.R + g * NF / s + g * (p.W - p.R) / b +
             (a + g) * p.S0 + th * NF - 2.0 * th * N - g * th / b * (N - NF);
    case Derivative::dTCi_dNF:
      return -th * (N - NC);
    case Derivative::dTCii_dNF:
      return g * (b + s * th) / (s * b) * NC - th * (N - NC);
  }
  return 0.0;
}

}  // namespace commute::policy
