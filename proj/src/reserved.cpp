#include "commute/reserved.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "commute/errors.hpp"

namespace commute::reserved {

namespace {

[[noreturn]] void precond(const std::string& what) { throw ModelError(ErrorCode::PrecondViolation, what); }

struct Prepared {
  double M = 0.0;
  bool capped = false;
  DerivedConstants d;
};

Prepared prepare(const ScenarioParams& p, double M, double NF) {
  validate(p);
  const double W0 = (p.alpha - p.beta) * p.S0 + p.F;
  if (!(p.W <= W0)) precond("W <= W0 required (eFHV must beat driving)");
  if (p.eps != 0.0) precond("eps == 0 required (all parking reserved)");
  if (!(M >= 0.0)) precond("M >= 0 required");
  if (!(NF >= 0.0)) precond("NF >= 0 required");
  const double nf0 = virtual_efhv_demand_raw(p);
  if (!(NF <= nf0)) {
    std::ostringstream os;
    os << "NF <= NF0 = " << nf0 << " required, got NF=" << NF;
    precond(os.str());
  }
  Prepared out;
  const double nc0 = virtual_parking_demand(p, 0.0);
  out.capped = M > nc0;
  out.M = std::min(M, nc0);
  out.d = derive(p, NF, out.M);
  return out;
}

double count_from(const Prepared& pr, double NF) {
  const auto& d = pr.d;
  const double bound = NF <= d.NF3 ? d.M4 : d.M5;
  return std::max(0.0, std::min(pr.M, bound));
}

CostCase case_from(const Prepared& pr, double NF) {
  return (NF <= pr.d.NF3 || pr.M <= pr.d.M2) ? CostCase::i : CostCase::ii;
}

ClassCosts costs_from(const ScenarioParams& p, CostCase c, double NC, double NF) {
  ClassCosts k;
  k.Pf = transit_cost(p, p.N - NF - NC);
  k.P_transit = k.Pf;
  k.Pr = c == CostCase::i ? auto_cost_idle_gap(p, NC) : auto_cost_continuous_queue(p, NC, NF);
  return k;
}

ReservedOutcome build(const ScenarioParams& p, double M, double NF) {
  const Prepared pr = prepare(p, M, NF);
  ReservedOutcome o;
  o.M = pr.M;
  o.M_capped = pr.capped;
  o.NF = NF;
  o.NC = count_from(pr, NF);
  o.NT = p.N - NF - o.NC;
  if (o.NT < -1e-9 * p.N) precond("NF + NC must not exceed N");
  o.idle_spaces = o.M - o.NC;
  o.classification.cost_case = case_from(pr, NF);
  o.costs = costs_from(p, o.classification.cost_case, o.NC, NF);
  o.TC = o.costs.Pr * o.NC + o.costs.Pf * (p.N - o.NC);

  const double a = p.alpha, b = p.beta, g = p.gamma, s = p.s, ts = p.t_star;
  const double r1 = a * s / (a - b), r2 = a * s / (a + g);
  Timeline& tl = o.timeline;

  // eFHVs lead from an empty queue at constant cost Pf.
  const double Pf = o.costs.Pf;
  tl.t1 = ts - (Pf - p.W) / b;
  const double t3f = ts - (Pf - p.W) / a;
  const double early_f = r1 * std::max(0.0, t3f - tl.t1);
  ModeBlock fb{tl.t1, 0.0, 0.0, r1, r2};
  if (NF <= early_f) {
    fb.end = tl.t1 + NF / r1;
    fb.on_time = fb.end;
  } else {
    fb.on_time = t3f;
    fb.end = t3f + (NF - early_f) / r2;
    tl.t3f = t3f;
  }
  tl.efhv_last_departure = fb.end;
  tl.efhv_last_exit = tl.t1 + NF / s;
  if (NF > 0.0) o.efhv_block = fb;

  // Autos trail at constant cost Pr; the last one meets an empty queue and is late.
  const double Pr = o.costs.Pr;
  tl.t4 = ts + (Pr - (a + g) * p.S0 - p.F) / g;
  const double t3c = ts - (Pr - p.F) / a;
  const double late_c = r2 * std::max(0.0, tl.t4 - t3c);
  ModeBlock cb{0.0, 0.0, tl.t4, r1, r2};
  if (o.NC <= late_c) {
    cb.start = tl.t4 - o.NC / r2;
    cb.on_time = cb.start;
  } else {
    cb.start = t3c - (o.NC - late_c) / r1;
    cb.on_time = t3c;
    tl.t3c = t3c;
  }
  tl.t2 = cb.start;
  if (o.NC > 0.0) o.auto_block = cb;

  if (o.classification.cost_case == CostCase::i) {
    o.classification.scenario = Scenario::S1;
    tl.tfl = tl.efhv_last_exit;
  } else {
    o.classification.scenario = tl.efhv_last_exit > ts ? Scenario::S3 : Scenario::S2;
    tl.tfl = tl.efhv_last_departure;
  }
  return o;
}

}  // namespace

std::string_view to_string(Scenario s) {
  switch (s) {
    case Scenario::S1: return "S1";
    case Scenario::S2: return "S2";
    case Scenario::S3: return "S3";
  }
  return "?";
}

std::string_view to_string(CostCase c) { return c == CostCase::i ? "i" : "ii"; }

double auto_cost_idle_gap(const ScenarioParams& p, double NC) {
  return p.beta * p.gamma / ((p.beta + p.gamma) * p.s) * NC + p.alpha * p.S0 + p.F;
}

double auto_cost_continuous_queue(const ScenarioParams& p, double NC, double NF) {
  const double Pf = transit_cost(p, p.N - NF - NC);
  return p.gamma * (p.W * p.s + p.beta * (NC + NF) - Pf * p.s) / (p.beta * p.s) +
         (p.alpha + p.gamma) * p.S0 + p.F;
}

Classification classify(const ScenarioParams& p, double M, double NF) {
  return build(p, M, NF).classification;
}

double auto_count(const ScenarioParams& p, double M, double NF) {
  const Prepared pr = prepare(p, M, NF);
  return count_from(pr, NF);
}

ClassCosts class_costs(const ScenarioParams& p, double M, double NF) {
  const Prepared pr = prepare(p, M, NF);
  return costs_from(p, case_from(pr, NF), count_from(pr, NF), NF);
}

Timeline timeline(const ScenarioParams& p, double M, double NF) { return build(p, M, NF).timeline; }

double total_cost(const ScenarioParams& p, double M, double NF) {
  const Prepared pr = prepare(p, M, NF);
  const double NC = count_from(pr, NF);
  const ClassCosts k = costs_from(p, case_from(pr, NF), NC, NF);
  return k.Pr * NC + k.Pf * (p.N - NC);
}

ReservedOutcome solve(const ScenarioParams& p, double M, double NF) { return build(p, M, NF); }

EquilibriumOutcome to_equilibrium(const ReservedOutcome& o) {
  EquilibriumOutcome e;
  e.regime = "reserved";
  e.label = std::string(to_string(o.classification.scenario)) + "/" +
            std::string(to_string(o.classification.cost_case));
  e.NC = o.NC;
  e.NF = o.NF;
  e.NT = o.NT;
  e.cost_auto = o.costs.Pr;
  e.cost_efhv = o.costs.Pf;
  e.cost_transit = o.costs.P_transit;
  e.TC = o.TC;
  e.auto_block = o.auto_block;
  e.efhv_block = o.efhv_block;
  e.search_normalizer = o.NC;
  e.reserved_autos = true;
  // The fleet is booked out once the last eFHV has left.
  e.efhv_deadline = o.efhv_block ? o.efhv_block->end : -std::numeric_limits<double>::infinity();
  return e;
}

}  // namespace commute::reserved
