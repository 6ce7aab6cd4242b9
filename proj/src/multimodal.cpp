#include "commute/multimodal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "commute/bimodal.hpp"
#include "commute/errors.hpp"

namespace commute::multimodal {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kConsistencyTol = 1e-9;

enum class AutoStop { Parity, Full, QueueEmpty };

struct AutoRun {
  AutoStop stop = AutoStop::Full;
  double t1 = 0.0;
  double tcl = 0.0;
  double n = 0.0;
  double queue = 0.0;
  double last_arrival = 0.0;
  std::optional<double> t3c;
};

struct EfhvRun {
  bool any = false;
  double t2 = 0.0;
  double queue = 0.0;
  std::optional<double> t3f;
  double t4 = 0.0;
  double count = 0.0;
  ModeBlock block;
};

bool within(double x, double target) { return x <= target + 1e-12 * (1.0 + std::abs(target)); }

// Autos leave from an empty queue at cost P and keep it constant until the
// parking fills, the eFHV cost drops to P, or the queue empties.
AutoRun run_autos(const ScenarioParams& p, double M, double P, bimodal::DepartureRates ra) {
  const double a = p.alpha, b = p.beta, g = p.gamma, s = p.s, ts = p.t_star;
  AutoRun run;
  run.t1 = ts - p.S0 - (P - a * p.S0 - p.F) / b;
  double t = run.t1, n = 0.0, D = 0.0;
  bool auto_late = run.t1 + p.S0 >= ts;
  bool efhv_late = run.t1 >= ts;
  const double growth = (p.eps > 0.0) ? p.eps / M : 0.0;

  for (int piece = 0; piece < 32; ++piece) {
    const double r = auto_late ? ra.late : ra.early;
    const double S = p.S0 + growth * n;
    const double e = t + D / s;
    const double A = e + S;
    const bool active = D > 0.0 || r > s;
    if (!active && auto_late) {
      run.stop = AutoStop::QueueEmpty;
      break;
    }
    const double Dp = active ? r - s : 0.0;
    const double ep = active ? r / s : 1.0;
    const double Sp = growth * r;
    const double Ap = ep + Sp;

    double diff, diffp;
    if (!auto_late) {
      diff = (a - b) * S + p.F - p.W;
      diffp = (a - b) * Sp;
    } else if (!efhv_late) {
      diff = a * S + g * (A - ts) - b * (ts - e) + p.F - p.W;
      diffp = a * Sp + g * Ap + b * ep;
    } else {
      diff = (a + g) * S + p.F - p.W;
      diffp = (a + g) * Sp;
    }

    const double dt_full = std::max(0.0, (M - n) / r);
    if (diff >= 0.0) {
      run.stop = dt_full <= 0.0 ? AutoStop::Full : AutoStop::Parity;
      break;
    }
    const double dt_par = diffp > 0.0 ? -diff / diffp : kInf;
    const double dt_arr = auto_late ? kInf : std::max(0.0, (ts - A) / Ap);
    const double dt_ef = efhv_late ? kInf : std::max(0.0, (ts - e) / ep);
    const double dt_qe = Dp < 0.0 ? D / -Dp : kInf;
    const double dt = std::min({dt_par, dt_arr, dt_ef, dt_full, dt_qe});

    t += dt;
    n += r * dt;
    D = std::max(0.0, D + Dp * dt);

    const bool hit_full = within(dt_full, dt);
    const bool hit_par = within(dt_par, dt);
    const bool hit_qe = within(dt_qe, dt);
    if (within(dt_arr, dt)) {
      auto_late = true;
      run.t3c = t;
    }
    if (within(dt_ef, dt)) efhv_late = true;
    if (hit_full) {
      n = M;
      run.stop = AutoStop::Full;
      break;
    }
    if (hit_par) {
      run.stop = AutoStop::Parity;
      break;
    }
    if (hit_qe) {
      D = 0.0;
      run.stop = AutoStop::QueueEmpty;
      break;
    }
  }
  run.tcl = t;
  run.n = n;
  run.queue = D;
  run.last_arrival = t + D / s + p.S0 + growth * n;
  return run;
}

// eFHV block that starts at t2 behind `queue` vehicles and keeps cost constant
// until the queue vanishes.
EfhvRun efhv_block_from(const ScenarioParams& p, double t2, double queue) {
  const double s = p.s, ts = p.t_star;
  const double r1 = p.alpha * s / (p.alpha - p.beta);
  const double r2 = p.alpha * s / (p.alpha + p.gamma);
  EfhvRun run;
  run.t2 = t2;
  run.queue = queue;
  const double e2 = t2 + queue / s;
  if (e2 < ts) {
    const double t3f = t2 + (ts - e2) * s / r1;
    const double D3 = queue + (r1 - s) * (t3f - t2);
    run.t3f = t3f;
    run.t4 = t3f + D3 / (s - r2);
    run.count = r1 * (t3f - t2) + r2 * (run.t4 - t3f);
    run.block = {t2, t3f, run.t4, r1, r2};
  } else {
    run.t4 = t2 + queue / (s - r2);
    run.count = r2 * (run.t4 - t2);
    run.block = {t2, t2, run.t4, r1, r2};
  }
  run.any = run.count > 0.0;
  return run;
}

EfhvRun run_efhvs(const ScenarioParams& p, const AutoRun& autos, double P) {
  const double ts = p.t_star;
  if (autos.stop == AutoStop::Parity) return efhv_block_from(p, autos.tcl, autos.queue);

  // Nobody departs while the auto queue drains; the eFHV cost falls at rate alpha.
  const double e_cl = autos.tcl + autos.queue / p.s;
  const double sched = e_cl <= ts ? p.beta * (ts - e_cl) : p.gamma * (e_cl - ts);
  const double base = p.W + sched;
  if (P >= base) {
    const double t2 = std::max(autos.tcl, e_cl - (P - base) / p.alpha);
    return efhv_block_from(p, t2, std::max(0.0, p.s * (e_cl - t2)));
  }
  if (e_cl < ts && P >= p.W) return efhv_block_from(p, ts - (P - p.W) / p.beta, 0.0);
  return {};
}

Pattern label(Family fam, bool car_early) {
  switch (fam) {
    case Family::QueueClears: return car_early ? Pattern::b : Pattern::d;
    case Family::AutosOnly: return Pattern::i;
    case Family::EfhvOnly: return Pattern::j;
    case Family::QueueNeverClears: break;
  }
  return Pattern::j;
}

Pattern never_clearing_label(bool parity_first, bool car_early, bool efhv_early) {
  if (parity_first) return car_early ? Pattern::a : (efhv_early ? Pattern::g : Pattern::h);
  return car_early ? Pattern::c : (efhv_early ? Pattern::e : Pattern::f);
}

void fill_common(MultimodalOutcome& o, const ScenarioParams& p, double M) {
  o.M = M;
  o.NT = p.N - o.NC - o.NF;
  o.TC = o.P * p.N;
  o.delta = (o.P - transit_cost(p, p.N - M)) * p.N;
  o.oversupply = M - o.NC;
}

std::optional<MultimodalOutcome> try_family(const ScenarioParams& p, double M, double P, Family fam,
                                            bimodal::DepartureRates ra) {
  if (!(P >= p.alpha * p.S0 + p.F) || !std::isfinite(P)) return std::nullopt;
  const AutoRun autos = run_autos(p, M, P, ra);
  if (autos.stop == AutoStop::QueueEmpty) return std::nullopt;
  const EfhvRun efhv = run_efhvs(p, autos, P);

  const double queue_tol = 1e-9 * p.s;
  switch (fam) {
    case Family::QueueNeverClears:
      if (!efhv.any || !(efhv.queue > queue_tol)) return std::nullopt;
      break;
    case Family::QueueClears:
      if (autos.stop != AutoStop::Full || !efhv.any || efhv.queue > queue_tol) return std::nullopt;
      break;
    case Family::AutosOnly:
      if (autos.stop != AutoStop::Full || efhv.any) return std::nullopt;
      break;
    case Family::EfhvOnly:
      return std::nullopt;
  }

  MultimodalOutcome o;
  o.NC = autos.n;
  o.NF = efhv.any ? efhv.count : 0.0;
  o.P = P;
  const double implied = transit_cost(p, p.N - o.NC - o.NF);
  if (std::abs(implied - P) > kConsistencyTol * std::max(1.0, std::abs(P))) return std::nullopt;

  const bool car_early = autos.last_arrival <= p.t_star;
  const bool efhv_early = efhv.any && efhv.t2 + efhv.queue / p.s <= p.t_star;
  o.pattern = fam == Family::QueueNeverClears
                  ? never_clearing_label(autos.stop == AutoStop::Parity, car_early, efhv_early)
                  : label(fam, car_early);
  o.queue_at_first_efhv = efhv.any ? efhv.queue : 0.0;

  ModeBlock ab{autos.t1, autos.t3c.value_or(autos.tcl), autos.tcl, ra.early, ra.late};
  if (o.NC > 0.0) o.auto_block = ab;
  o.timeline.t1 = autos.t1;
  o.timeline.tcl = autos.tcl;
  o.timeline.t3c = autos.t3c;
  if (efhv.any) {
    o.efhv_block = efhv.block;
    o.timeline.t2 = efhv.t2;
    o.timeline.t3f = efhv.t3f;
    o.timeline.t4 = efhv.t4;
  } else {
    o.timeline.t2 = autos.tcl;
    o.timeline.t4 = autos.tcl;
  }
  fill_common(o, p, M);
  return o;
}

MultimodalOutcome efhv_only(const ScenarioParams& p, double M) {
  MultimodalOutcome o;
  o.pattern = Pattern::j;
  const double raw = virtual_efhv_demand_raw(p);
  if (raw > p.N) {
    o.nf0_clamped = true;
    o.P = p.W + p.beta * p.gamma / (p.beta + p.gamma) * p.N / p.s;
  } else {
    o.P = transit_cost(p, p.N - std::max(0.0, raw));
  }
  const EfhvRun efhv = efhv_block_from(p, p.t_star - (o.P - p.W) / p.beta, 0.0);
  o.NC = 0.0;
  o.NF = efhv.count;
  o.efhv_block = efhv.block;
  o.timeline.t1 = efhv.t2;
  o.timeline.t2 = efhv.t2;
  o.timeline.t3f = efhv.t3f;
  o.timeline.t4 = efhv.t4;
  o.timeline.tcl = efhv.t2;
  fill_common(o, p, M);
  return o;
}

void check_preconditions(const ScenarioParams& p, double M) {
  validate(p);
  const double nc0 = virtual_parking_demand_raw(p, p.eps);
  if (!(M >= 0.0) || !(M < nc0)) {
    std::ostringstream os;
    os << "parking supply must satisfy 0 <= M < NC0 = " << nc0 << ", got M=" << M;
    throw ModelError(ErrorCode::PrecondViolation, os.str());
  }
  if (p.eps > 0.0 && !(M > 0.0)) {
    throw ModelError(ErrorCode::DivisionByZeroPopulation, "search growth needs M > 0");
  }
}

}  // namespace

char tag(Pattern p) { return static_cast<char>('a' + static_cast<int>(p)); }

Family family_of(Pattern p) {
  switch (p) {
    case Pattern::b:
    case Pattern::d: return Family::QueueClears;
    case Pattern::i: return Family::AutosOnly;
    case Pattern::j: return Family::EfhvOnly;
    default: return Family::QueueNeverClears;
  }
}

double total_road_users(const ScenarioParams& p) {
  const double W0 = (p.alpha - p.beta) * p.S0 + p.F;
  if (!(p.W > W0)) {
    throw ModelError(ErrorCode::PrecondModeMix, "W <= W0: eFHVs dominate driving, no mode mix");
  }
  return std::clamp(never_clearing_road_users_raw(p), 0.0, p.N);
}

std::vector<MultimodalOutcome> feasible_candidates(const ScenarioParams& p, double M) {
  check_preconditions(p, M);
  const double W0 = (p.alpha - p.beta) * p.S0 + p.F;
  if (p.W <= W0) return {efhv_only(p, M)};

  const auto ra = bimodal::departure_rates(p, M);
  if (!(ra.early > p.s)) {
    throw ModelError(ErrorCode::PrecondViolation,
                     "search congestion too strong: early auto rate does not exceed capacity");
  }
  const double C = composite_c(p);
  const double P_never_clears = transit_cost(p, p.N - never_clearing_road_users_raw(p));
  const double P_clears = p.beta * p.gamma / C * (p.R + p.theta * (p.N - M) - p.W) + p.W;
  const double P_autos_only = transit_cost(p, p.N - M);

  std::vector<MultimodalOutcome> out;
  for (auto [fam, P] : {std::pair{Family::QueueNeverClears, P_never_clears},
                        std::pair{Family::QueueClears, P_clears},
                        std::pair{Family::AutosOnly, P_autos_only}}) {
    if (auto o = try_family(p, M, P, fam, ra)) out.push_back(*o);
  }
  std::sort(out.begin(), out.end(),
            [](const auto& x, const auto& y) { return x.pattern < y.pattern; });
  return out;
}

MultimodalOutcome solve(const ScenarioParams& p, double M) {
  auto candidates = feasible_candidates(p, M);
  if (candidates.empty()) {
    std::ostringstream os;
    os << "no equilibrium pattern fits M=" << M << " W=" << p.W;
    throw ModelError(ErrorCode::NoConsistentPattern, os.str());
  }
  MultimodalOutcome o = candidates.front();
  o.boundary_tie = candidates.size() > 1;
  return o;
}

DeltaReport system_cost_delta(const ScenarioParams& p, double M) {
  const MultimodalOutcome o = solve(p, M);
  DeltaReport r;
  r.delta = o.delta;
  r.pattern = o.pattern;
  const DerivedConstants d = derive(p, 0.0);
  if (o.pattern == Pattern::i) {
    r.sign_note = "autos only: ride-sourcing changes nothing, delta = 0";
  } else if (family_of(o.pattern) == Family::QueueClears) {
    r.sign_note = "eFHVs fill idle capacity: delta < 0";
  } else if (p.W <= d.W2) {
    r.sign_note = "W <= W2: delta < 0";
  } else {
    r.sign_note = "W > W2: sign depends on M";
  }
  return r;
}

EquilibriumOutcome to_equilibrium(const MultimodalOutcome& o) {
  EquilibriumOutcome e;
  e.regime = "multimodal";
  e.label = std::string(1, tag(o.pattern));
  e.NC = o.NC;
  e.NF = o.NF;
  e.NT = o.NT;
  e.cost_auto = e.cost_efhv = e.cost_transit = o.P;
  e.TC = o.TC;
  e.auto_block = o.auto_block;
  e.efhv_block = o.efhv_block;
  e.search_normalizer = o.M;
  e.reserved_autos = false;
  const bool parking_full = o.NC >= o.M * (1.0 - 1e-12) && o.pattern != Pattern::j;
  e.auto_deadline = parking_full ? o.timeline.tcl : kInf;
  return e;
}

}  // namespace commute::multimodal
