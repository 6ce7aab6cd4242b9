#include "commute/sim.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "commute/errors.hpp"

namespace commute::sim {

namespace {

[[noreturn]] void inconsistent(const std::string& what) { throw ModelError(ErrorCode::InconsistentOutcome, what); }

bool close_rel(double a, double b, double tol) { return std::abs(a - b) <= tol * std::max(1.0, std::abs(b)); }

void push_block(std::vector<Segment>& out, const ModeBlock& b, Mode m) {
  const double sw = std::clamp(b.on_time, b.start, b.end);
  auto add = [&](double s, double e, double rate) {
    if (!(e > s) || rate <= 0.0) return;
    Segment seg{s, e, 0.0, 0.0};
    (m == Mode::Auto ? seg.auto_rate : seg.efhv_rate) = rate;
    out.push_back(seg);
  };
  add(b.start, sw, b.early_rate);
  add(sw, b.end, b.late_rate);
}

double segment_total(const std::vector<Segment>& segs, Mode m) {
  double total = 0.0;
  for (const auto& s : segs) total += (m == Mode::Auto ? s.auto_rate : s.efhv_rate) * (s.end - s.start);
  return total;
}

}  // namespace

void DepartureProfile::validate() const {
  for (std::size_t i = 0; i < segments.size(); ++i) {
    const Segment& s = segments[i];
    if (!(s.end >= s.start)) inconsistent("segment ends before it starts");
    if (s.auto_rate < 0.0 || s.efhv_rate < 0.0) inconsistent("negative departure rate");
    if (s.auto_rate > 0.0 && s.efhv_rate > 0.0) inconsistent("autos and eFHVs depart simultaneously");
    if (i > 0 && s.start < segments[i - 1].end) inconsistent("segments overlap or are out of order");
  }
  if (!close_rel(segment_total(segments, Mode::Auto), NC, 1e-9)) inconsistent("auto departures do not integrate to NC");
  if (!close_rel(segment_total(segments, Mode::Efhv), NF, 1e-9)) inconsistent("eFHV departures do not integrate to NF");
}

DepartureProfile build_profile(const EquilibriumOutcome& o) {
  DepartureProfile prof;
  prof.NC = o.NC;
  prof.NF = o.NF;
  prof.search_normalizer = o.search_normalizer;
  prof.reserved_autos = o.reserved_autos;

  auto check = [](const std::optional<ModeBlock>& b, double n, const char* what) {
    const double have = b ? b->count() : 0.0;
    if (!close_rel(have, n, 1e-9)) {
      std::ostringstream os;
      os << what << " block carries " << have << " travellers, outcome declares " << n;
      inconsistent(os.str());
    }
  };
  check(o.auto_block, o.NC, "auto");
  check(o.efhv_block, o.NF, "eFHV");

  std::vector<Segment> segs;
  if (o.auto_block) push_block(segs, *o.auto_block, Mode::Auto);
  if (o.efhv_block) push_block(segs, *o.efhv_block, Mode::Efhv);
  std::sort(segs.begin(), segs.end(), [](const Segment& a, const Segment& b) { return a.start < b.start; });

  // Blocks of different modes meet end to start; absorb rounding at the seam.
  for (std::size_t i = 1; i < segs.size(); ++i) {
    const double overlap = segs[i - 1].end - segs[i].start;
    if (overlap <= 0.0) continue;
    if (overlap > 1e-9 * std::max(1.0, std::abs(segs[i].start))) inconsistent("mode blocks overlap in time");
    segs[i].start = segs[i - 1].end;
    if (segs[i].end < segs[i].start) segs[i].end = segs[i].start;
  }
  prof.segments = std::move(segs);
  prof.validate();
  return prof;
}

DepartureProfile refine(const DepartureProfile& profile) {
  DepartureProfile out = profile;
  out.segments.clear();
  for (const auto& s : profile.segments) {
    const double mid = 0.5 * (s.start + s.end);
    out.segments.push_back({s.start, mid, s.auto_rate, s.efhv_rate});
    out.segments.push_back({mid, s.end, s.auto_rate, s.efhv_rate});
  }
  return out;
}

TracePoint SimTrace::at(double t) const {
  if (points.empty() || t <= points.front().t) return {t, 0.0, 0.0, 0.0};
  if (t >= points.back().t) {
    TracePoint p = points.back();
    p.t = t;
    p.queue = 0.0;
    return p;
  }
  const auto it = std::upper_bound(points.begin(), points.end(), t,
                                   [](double v, const TracePoint& p) { return v < p.t; });
  const TracePoint& b = *it;
  const TracePoint& a = *(it - 1);
  const double w = (t - a.t) / (b.t - a.t);
  auto lerp = [w](double x, double y) { return x + w * (y - x); };
  return {t, lerp(a.cum_auto, b.cum_auto), lerp(a.cum_efhv, b.cum_efhv), std::max(0.0, lerp(a.queue, b.queue))};
}

double SimTrace::travel_time(double t) const { return queue(t) / params.s; }

double SimTrace::search_time(double t) const {
  if (reserved_autos || params.eps == 0.0 || search_normalizer <= 0.0) return params.S0;
  return params.S0 + params.eps * at(t).cum_auto / search_normalizer;
}

std::vector<double> SimTrace::breakpoints() const {
  std::vector<double> out;
  out.reserve(points.size());
  for (const auto& p : points) out.push_back(p.t);
  return out;
}

std::vector<std::pair<double, double>> SimTrace::queue_zero_intervals(double tol) const {
  std::vector<std::pair<double, double>> out;
  if (points.size() < 3) return out;
  const double scale = std::max(1.0, points.back().cum_auto + points.back().cum_efhv);
  const double eps = tol * scale;
  // Only between the first and last instants with a queue; it is trivially
  // empty before the rush and after the final discharge.
  std::size_t first = points.size(), last = 0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i].queue > eps) {
      first = std::min(first, i);
      last = i;
    }
  }
  bool open = false;
  for (std::size_t i = first + 1; i < last; ++i) {
    const bool zero = points[i].queue <= eps;
    if (zero && !open) {
      out.emplace_back(points[i].t, points[i].t);
      open = true;
    } else if (zero) {
      out.back().second = points[i].t;
    } else {
      open = false;
    }
  }
  return out;
}

SimTrace simulate(const ScenarioParams& p, const DepartureProfile& profile) {
  SimTrace tr;
  tr.params = p;
  tr.search_normalizer = profile.search_normalizer;
  tr.reserved_autos = profile.reserved_autos;
  if (profile.segments.empty()) return tr;

  const double s = p.s;
  double t = profile.segments.front().start;
  double Ac = 0.0, Af = 0.0, D = 0.0;
  auto push = [&] {
    if (!tr.points.empty() && tr.points.back().t == t) {
      tr.points.back() = {t, Ac, Af, D};
    } else {
      tr.points.push_back({t, Ac, Af, D});
    }
  };
  push();

  // Integrates constant inflow (rc, rf) from t to t1, splitting at the
  // instant the queue empties.
  auto advance = [&](double t1, double rc, double rf) {
    if (!(t1 > t)) return;
    const double r = rc + rf;
    if (D > 0.0 || r > s) {
      const double Dn = D + (r - s) * (t1 - t);
      const double snap = 1e-12 * std::max(1.0, Ac + Af + r * (t1 - t));
      if (Dn <= snap && r < s) {
        const double tau = std::min(t1, t + D / (s - r));
        Ac += rc * (tau - t);
        Af += rf * (tau - t);
        t = tau;
        D = 0.0;
        push();
        if (t1 > t) {
          Ac += rc * (t1 - t);
          Af += rf * (t1 - t);
          t = t1;
          push();
        }
        return;
      }
      D = std::max(0.0, Dn);
    }
    Ac += rc * (t1 - t);
    Af += rf * (t1 - t);
    t = t1;
    push();
  };

  for (const auto& seg : profile.segments) {
    advance(seg.start, 0.0, 0.0);
    advance(seg.end, seg.auto_rate, seg.efhv_rate);
  }
  if (D > 1e-12 * std::max(1.0, Ac + Af)) advance(t + D / s, 0.0, 0.0);

  constexpr int kSamples = 16;
  for (const auto& seg : profile.segments) {
    if (!(seg.end > seg.start)) continue;
    const Mode m = seg.auto_rate > 0.0 ? Mode::Auto : Mode::Efhv;
    if (seg.auto_rate <= 0.0 && seg.efhv_rate <= 0.0) continue;
    for (int k = 0; k <= kSamples; ++k) {
      const double td = seg.start + (seg.end - seg.start) * k / kSamples;
      tr.samples.push_back({td, m, realized_cost(tr, m, td)});
    }
  }
  return tr;
}

double realized_cost(const SimTrace& trace, Mode mode, double t_dep) {
  const ScenarioParams& p = trace.params;
  const double T = trace.travel_time(t_dep);
  const double S = mode == Mode::Auto ? trace.search_time(t_dep) : 0.0;
  const double arrive = t_dep + T + S;
  const double sched = p.beta * std::max(0.0, p.t_star - arrive) + p.gamma * std::max(0.0, arrive - p.t_star);
  return p.alpha * (T + S) + sched + (mode == Mode::Auto ? p.F : p.W);
}

VerificationReport verify(const ScenarioParams& p, const EquilibriumOutcome& outcome, const DepartureProfile& profile,
                          const VerifyOptions& opt) {
  VerificationReport rep;
  const SimTrace trace = simulate(p, profile);
  auto fail = [&](const std::string& why) {
    rep.pass = false;
    rep.failures.push_back(why);
  };

  struct Used {
    Mode mode;
    double count;
    double expected;
    double deadline;
  };
  const Used used[] = {{Mode::Auto, outcome.NC, outcome.cost_auto, outcome.auto_deadline},
                       {Mode::Efhv, outcome.NF, outcome.cost_efhv, outcome.efhv_deadline}};

  for (const auto& u : used) {
    if (!(u.count > 0.0)) continue;
    ClassCheck c;
    c.mode = u.mode;
    c.expected = u.expected;
    c.min_cost = std::numeric_limits<double>::infinity();
    c.max_cost = -std::numeric_limits<double>::infinity();
    const double denom = std::max(std::abs(u.expected), 1e-12);
    for (const auto& smp : trace.samples) {
      if (smp.mode != u.mode) continue;
      ++c.samples;
      c.min_cost = std::min(c.min_cost, smp.cost);
      c.max_cost = std::max(c.max_cost, smp.cost);
      c.max_error_rel = std::max(c.max_error_rel, std::abs(smp.cost - u.expected) / denom);
    }
    if (c.samples == 0) {
      fail(std::string(u.mode == Mode::Auto ? "auto" : "eFHV") + " class has no departures");
      continue;
    }
    c.spread_rel = (c.max_cost - c.min_cost) / denom;
    const char* name = u.mode == Mode::Auto ? "auto" : "eFHV";
    if (c.spread_rel > opt.spread_tol) fail(std::string(name) + " realized costs spread beyond tolerance");
    if (c.max_error_rel > opt.spread_tol) fail(std::string(name) + " realized cost differs from equilibrium cost");
    rep.classes.push_back(c);
  }

  if (outcome.NC > 0.0 && outcome.NF > 0.0) {
    rep.reserved_not_dearer = outcome.cost_auto <= outcome.cost_efhv * (1.0 + 1e-9);
    if (outcome.reserved_autos && !*rep.reserved_not_dearer) fail("reserved autos pay more than eFHV riders");
  }

  // Nobody may gain by shifting departure time within their mode.
  if (!profile.segments.empty()) {
    const double lo = profile.segments.front().start - opt.probe_pad;
    const double hi = profile.segments.back().end + opt.probe_pad;
    std::vector<double> times;
    times.reserve(opt.probe_count + trace.points.size());
    for (std::size_t k = 0; k < opt.probe_count; ++k) {
      times.push_back(lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(opt.probe_count - 1));
    }
    for (const auto& pt : trace.points) times.push_back(pt.t);
    for (const auto& u : used) {
      if (!(u.count > 0.0)) continue;
      const double denom = std::max(std::abs(u.expected), 1e-12);
      const double last = u.deadline + 1e-9 * std::max(1.0, std::abs(u.deadline));
      for (double t : times) {
        if (t > last) continue;
        ++rep.probes;
        const double margin = (realized_cost(trace, u.mode, t) - u.expected) / denom;
        if (margin < rep.min_margin_rel) {
          rep.min_margin_rel = margin;
          rep.worst_probe_t = t;
          rep.worst_probe_mode = u.mode;
        }
      }
    }
    if (rep.min_margin_rel < -opt.margin_tol) {
      std::ostringstream os;
      os << "profitable deviation at t=" << rep.worst_probe_t << " (margin " << rep.min_margin_rel << ")";
      fail(os.str());
    }
  }

  const double declared = outcome.NC + outcome.NF;
  const TracePoint end = trace.points.empty() ? TracePoint{} : trace.points.back();
  rep.entry_error = std::abs(end.cum_auto + end.cum_efhv - declared);
  rep.exit_error = std::abs(end.cum_exit() - (end.cum_auto + end.cum_efhv));
  rep.min_queue = 0.0;
  for (const auto& pt : trace.points) rep.min_queue = std::min(rep.min_queue, pt.queue);
  if (rep.entry_error > 1e-9 * std::max(1.0, declared)) fail("entries do not match declared travellers");
  if (rep.exit_error > 1e-9 * std::max(1.0, declared)) fail("queue does not discharge completely");
  if (rep.min_queue < 0.0) fail("negative queue");
  return rep;
}

VerificationReport verify(const ScenarioParams& p, const EquilibriumOutcome& outcome) {
  return verify(p, outcome, build_profile(outcome));
}

void write_trace_csv(std::ostream& os, const SimTrace& trace) {
  os << "# commute-trace v1\n";
  os << "t,cum_entry_auto,cum_entry_efhv,cum_exit,queue\n";
  os << std::setprecision(6);
  for (const auto& p : trace.points) {
    os << p.t << ',' << p.cum_auto << ',' << p.cum_efhv << ',' << p.cum_exit() << ',' << p.queue << '\n';
  }
}

}  // namespace commute::sim
