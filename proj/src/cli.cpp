#include "commute/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

#include "commute/bimodal.hpp"
#include "commute/errors.hpp"
#include "commute/multimodal.hpp"
#include "commute/policy.hpp"
#include "commute/reserved.hpp"
#include "commute/scenario_io.hpp"
#include "commute/sim.hpp"

namespace commute::cli {

namespace {

[[noreturn]] void invalid(const std::string& what) { throw ModelError(ErrorCode::ValidationError, what); }

struct Options {
  std::string scenario;
  std::optional<double> M;
  std::optional<double> NF;
  std::string regime;
  std::string grid;
  std::string control = "M";
  std::string out;
  std::string trace;
  double oracle_step = 1.0;
  bool verify = false;
};

struct Row {
  std::string key;
  std::string value;
};

void print_rows(std::ostream& os, const std::vector<Row>& rows) {
  std::size_t w = 0;
  for (const auto& r : rows) w = std::max(w, r.key.size());
  for (const auto& r : rows) os << std::left << std::setw(static_cast<int>(w) + 2) << r.key << r.value << '\n';
}

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path);
  if (!f) invalid("cannot write '" + path + "'");
  return f;
}

ScenarioParams load(const Options& o) {
  ScenarioParams p = load_scenario(o.scenario);
  if (o.M) p.M = o.M;
  if (o.NF) p.NF = o.NF;
  return validate(p);
}

Regime default_regime(const ScenarioParams& p) {
  const double W0 = (p.alpha - p.beta) * p.S0 + p.F;
  return p.W <= W0 ? Regime::Reserved : Regime::Multimodal;
}

Regime regime_of(const Options& o, const ScenarioParams& p) {
  return o.regime.empty() ? default_regime(p) : parse_regime(o.regime);
}

std::vector<Row> outcome_rows(const ScenarioParams& p, Regime r, const Solved& s) {
  const EquilibriumOutcome& e = s.eq;
  std::vector<Row> rows = {{"regime", to_string(r)}, {"label", e.label}};
  if (p.M) rows.push_back({"M", fmt(*p.M)});
  rows.push_back({"NC", fmt(e.NC)});
  rows.push_back({"NF", fmt(e.NF)});
  rows.push_back({"NT", fmt(e.NT)});
  rows.push_back({"P_auto", fmt(e.cost_auto)});
  if (r == Regime::Multimodal || r == Regime::Reserved) rows.push_back({"P_efhv", fmt(e.cost_efhv)});
  rows.push_back({"P_transit", fmt(e.cost_transit)});
  rows.push_back({"TC", fmt(e.TC)});
  for (const auto& [k, v] : s.extras) rows.push_back({k, v});
  return rows;
}

void write_outcome_csv(std::ostream& os, Regime r, const Solved& s, std::optional<double> M) {
  const EquilibriumOutcome& e = s.eq;
  os << "# commute-equilibrium v1\n";
  os << "regime,label,M,NC,NF,NT,P_auto,P_efhv,P_transit,TC\n";
  os << to_string(r) << ',' << e.label << ',' << (M ? fmt(*M) : "") << ',' << fmt(e.NC) << ',' << fmt(e.NF)
     << ',' << fmt(e.NT) << ',' << fmt(e.cost_auto) << ',' << fmt(e.cost_efhv) << ',' << fmt(e.cost_transit)
     << ',' << fmt(e.TC) << '\n';
}

std::vector<Row> report_rows(const sim::VerificationReport& rep) {
  std::vector<Row> rows = {{"verification", rep.pass ? "PASS" : "FAIL"}};
  for (const auto& c : rep.classes) {
    const std::string name = c.mode == sim::Mode::Auto ? "auto" : "efhv";
    rows.push_back({name + "_cost_spread_rel", fmt(c.spread_rel)});
    rows.push_back({name + "_cost_error_rel", fmt(c.max_error_rel)});
  }
  if (rep.reserved_not_dearer) rows.push_back({"auto_not_dearer", *rep.reserved_not_dearer ? "yes" : "no"});
  rows.push_back({"probes", std::to_string(rep.probes)});
  if (rep.probes > 0) rows.push_back({"min_deviation_margin_rel", fmt(rep.min_margin_rel)});
  rows.push_back({"entry_error", fmt(rep.entry_error)});
  rows.push_back({"exit_error", fmt(rep.exit_error)});
  for (const auto& f : rep.failures) rows.push_back({"failure", f});
  return rows;
}

int run_verification(const ScenarioParams& p, const Solved& s, const std::string& trace_path, std::ostream& out) {
  const sim::DepartureProfile prof = sim::build_profile(s.eq);
  const sim::VerificationReport rep = sim::verify(p, s.eq, prof);
  if (!trace_path.empty()) {
    auto f = open_out(trace_path);
    sim::write_trace_csv(f, sim::simulate(p, prof));
  }
  print_rows(out, report_rows(rep));
  return rep.pass ? kExitOk : kExitVerify;
}

int cmd_equilibrium(const Options& o, std::ostream& out) {
  const ScenarioParams p = load(o);
  const Regime r = regime_of(o, p);
  const Solved s = solve_regime(p, r, p.M, p.NF);
  print_rows(out, outcome_rows(p, r, s));
  if (!o.out.empty()) {
    auto f = open_out(o.out);
    write_outcome_csv(f, r, s, p.M);
  }
  if (o.verify || !o.trace.empty()) {
    const int rc = run_verification(p, s, o.trace, out);
    if (o.verify) return rc;
  }
  return kExitOk;
}

int cmd_verify(const Options& o, std::ostream& out) {
  const ScenarioParams p = load(o);
  const Regime r = regime_of(o, p);
  const Solved s = solve_regime(p, r, p.M, p.NF);
  print_rows(out, outcome_rows(p, r, s));
  return run_verification(p, s, o.out.empty() ? o.trace : o.out, out);
}

void write_curve_csv(std::ostream& os, const char* control, const policy::GridResult& g) {
  os << "# commute-policy-grid v1\n";
  os << control << ",NC,NT,Pr,Pf,TC,cost_case,idle_free\n";
  for (const auto& pt : g.curve) {
    os << fmt(pt.control) << ',' << fmt(pt.NC) << ',' << fmt(pt.NT) << ',' << fmt(pt.Pr) << ',' << fmt(pt.Pf)
       << ',' << fmt(pt.TC) << ',' << reserved::to_string(pt.cost_case) << ',' << (pt.idle_free ? 1 : 0)
       << '\n';
  }
}

std::vector<Row> policy_rows(const policy::PolicyResult& r, const char* name) {
  return {{name, fmt(r.argopt)},
          {"branch", r.branch_name + " (" + std::to_string(r.branch) + ")"},
          {"TC_opt", fmt(r.TC_at_opt)},
          {"oracle_argmin", fmt(r.oracle_argopt)},
          {"oracle_TC", fmt(r.oracle_TC)},
          {"oracle_gap", fmt(r.oracle_gap)},
          {"oracle_step", fmt(r.grid_step)},
          {"oracle_agrees", r.branch_mismatch ? "no" : "yes"}};
}

int cmd_optimize_parking(const Options& o, std::ostream& out) {
  const ScenarioParams p = load(o);
  if (!p.NF) invalid("optimize-parking needs NF (scenario file or --NF)");
  const policy::PolicyResult r = policy::optimal_parking(p, *p.NF, o.oracle_step);
  auto rows = policy_rows(r, "M_opt");
  // Whole spaces either side of the continuous optimum.
  const double nc0 = virtual_parking_demand(p, 0.0);
  const double lo = std::floor(r.argopt), hi = std::min(std::ceil(r.argopt), std::floor(nc0));
  rows.push_back({"TC_at_floor", fmt(reserved::total_cost(p, lo, *p.NF)) + " (M=" + fmt(lo) + ")"});
  rows.push_back({"TC_at_ceil", fmt(reserved::total_cost(p, hi, *p.NF)) + " (M=" + fmt(hi) + ")"});
  print_rows(out, rows);
  if (!o.out.empty()) {
    auto f = open_out(o.out);
    write_curve_csv(f, "M", policy::grid_oracle(p, policy::Control::Parking, *p.NF, 0.0, nc0, o.oracle_step));
  }
  return kExitOk;
}

int cmd_optimize_fleet(const Options& o, std::ostream& out) {
  const ScenarioParams p = load(o);
  if (!p.M) invalid("optimize-fleet needs M (scenario file or --M)");
  const policy::PolicyResult r = policy::optimal_fleet(p, *p.M, o.oracle_step);
  auto rows = policy_rows(r, "NF_opt");
  rows.push_back({"TC_no_efhv", fmt(*r.TC_benchmark)});
  rows.push_back({"eta", fmt(*r.eta)});
  const double nf0 = virtual_efhv_demand_raw(p);
  const double lo = std::floor(r.argopt), hi = std::min(std::ceil(r.argopt), std::floor(nf0));
  rows.push_back({"TC_at_floor", fmt(reserved::total_cost(p, *p.M, lo)) + " (NF=" + fmt(lo) + ")"});
  rows.push_back({"TC_at_ceil", fmt(reserved::total_cost(p, *p.M, hi)) + " (NF=" + fmt(hi) + ")"});
  print_rows(out, rows);
  if (!o.out.empty()) {
    auto f = open_out(o.out);
    const double M = std::min(*p.M, virtual_parking_demand(p, 0.0));
    write_curve_csv(f, "NF", policy::grid_oracle(p, policy::Control::Fleet, M, 0.0, nf0, o.oracle_step, true));
  }
  return kExitOk;
}

int cmd_sweep(const Options& o, std::ostream& out) {
  const ScenarioParams p = load(o);
  const Regime r = regime_of(o, p);
  if (o.grid.empty()) invalid("sweep needs --grid lo:hi:step");
  const Grid g = parse_grid(o.grid);
  const bool over_M = o.control == "M";
  if (!over_M && o.control != "NF") invalid("--control must be M or NF");
  if (!over_M && r != Regime::Reserved) invalid("sweeping NF needs the reserved regime");

  std::ofstream file;
  if (!o.out.empty()) file = open_out(o.out);
  std::ostream& os = o.out.empty() ? out : file;
  os << "# commute-sweep v1 regime=" << to_string(r) << " control=" << o.control << '\n';
  os << "control,M,NF,NC,NT,P_auto,P_efhv,P_transit,TC,label\n";
  std::size_t failed = 0;
  for (double x : g.points()) {
    const std::optional<double> M = over_M ? std::optional<double>(x) : p.M;
    const std::optional<double> NF = over_M ? p.NF : std::optional<double>(x);
    os << fmt(x) << ',' << (M ? fmt(*M) : "") << ',' << fmt(NF.value_or(0.0)) << ',';
    try {
      const EquilibriumOutcome e = solve_regime(p, r, M, NF).eq;
      os << fmt(e.NC) << ',' << fmt(e.NT) << ',' << fmt(e.cost_auto) << ',' << fmt(e.cost_efhv) << ','
         << fmt(e.cost_transit) << ',' << fmt(e.TC) << ',' << e.label << '\n';
    } catch (const ModelError& err) {
      // Outside the regime's domain: keep the row so the grid stays regular.
      ++failed;
      os << ",,,,,," << to_string(err.code()) << '\n';
    }
  }
  if (!o.out.empty()) {
    out << "wrote " << g.points().size() << " rows to " << o.out;
    if (failed) out << " (" << failed << " outside the regime's domain)";
    out << '\n';
  }
  return kExitOk;
}

}  // namespace

Regime parse_regime(const std::string& name) {
  if (name == "bimodal") return Regime::Bimodal;
  if (name == "bimodal-reserved") return Regime::BimodalReserved;
  if (name == "multimodal") return Regime::Multimodal;
  if (name == "reserved") return Regime::Reserved;
  invalid("unknown regime '" + name + "'");
}

std::string to_string(Regime r) {
  switch (r) {
    case Regime::Bimodal: return "bimodal";
    case Regime::BimodalReserved: return "bimodal-reserved";
    case Regime::Multimodal: return "multimodal";
    case Regime::Reserved: return "reserved";
  }
  return "?";
}

std::vector<double> Grid::points() const {
  const auto n = static_cast<std::size_t>(std::floor((hi - lo) / step)) + 1;
  std::vector<double> out;
  out.reserve(n);
  for (std::size_t k = 0; k < n; ++k) out.push_back(lo + static_cast<double>(k) * step);
  return out;
}

Grid parse_grid(const std::string& text) {
  std::vector<double> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      invalid("grid must be lo:hi:step, got '" + text + "'");
    }
    if (used != item.size() || !std::isfinite(v)) invalid("grid must be lo:hi:step, got '" + text + "'");
    parts.push_back(v);
  }
  if (parts.size() != 3) invalid("grid must be lo:hi:step, got '" + text + "'");
  Grid g{parts[0], parts[1], parts[2]};
  if (!(g.step > 0.0)) invalid("grid step must be > 0");
  if (g.hi < g.lo) invalid("grid upper bound below lower bound");
  if ((g.hi - g.lo) / g.step > 1e7) invalid("grid has more than 10^7 points");
  return g;
}

Solved solve_regime(const ScenarioParams& p, Regime r, std::optional<double> M, std::optional<double> NF) {
  Solved s;
  const double nf = NF.value_or(0.0);
  switch (r) {
    case Regime::Bimodal:
    case Regime::BimodalReserved: {
      if (nf != 0.0) invalid("bimodal regimes have no eFHVs; NF must be 0");
      const bimodal::BimodalOutcome b =
          bimodal::equilibrium(p, M.value_or(std::numeric_limits<double>::infinity()), r == Regime::BimodalReserved);
      s.eq = bimodal::to_equilibrium(b);
      s.extras = {{"parking_binds", b.binding ? "yes" : "no"}};
      if (b.auto_block) {
        s.extras.push_back({"first_departure", fmt(b.auto_block->start)});
        s.extras.push_back({"last_departure", fmt(b.auto_block->end)});
      }
      break;
    }
    case Regime::Multimodal: {
      if (!M) invalid("multimodal regime needs M");
      const multimodal::MultimodalOutcome m = multimodal::solve(p, *M);
      s.eq = multimodal::to_equilibrium(m);
      s.extras = {{"pattern", std::string(1, multimodal::tag(m.pattern))},
                  {"boundary_tie", m.boundary_tie ? "yes" : "no"},
                  {"delta_TC", fmt(m.delta)},
                  {"t1", fmt(m.timeline.t1)},
                  {"t2", fmt(m.timeline.t2)},
                  {"t4", fmt(m.timeline.t4)}};
      if (m.nf0_clamped) s.extras.push_back({"efhv_demand_clamped", "yes"});
      break;
    }
    case Regime::Reserved: {
      if (!M) invalid("reserved regime needs M");
      const reserved::ReservedOutcome o = reserved::solve(p, *M, nf);
      s.eq = reserved::to_equilibrium(o);
      s.extras = {{"idle_spaces", fmt(o.idle_spaces)}};
      if (o.NF > 0.0) {
        s.extras.push_back({"t1", fmt(o.timeline.t1)});
        s.extras.push_back({"tfl", fmt(o.timeline.tfl)});
      }
      if (o.NC > 0.0) {
        s.extras.push_back({"t2", fmt(o.timeline.t2)});
        s.extras.push_back({"t4", fmt(o.timeline.t4)});
      }
      if (o.M_capped) s.extras.push_back({"M_capped_at", fmt(o.M)});
      break;
    }
  }
  return s;
}

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(6) << (v == 0.0 ? 0.0 : v);  // no "-0"
  return os.str();
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Morning-commute equilibria with parking limits and ride-sourcing"};
  app.require_subcommand(1);
  Options o;

  auto common = [&o](CLI::App* sub) {
    sub->add_option("--scenario", o.scenario, "scenario file (key = value)")->required();
    sub->add_option("--M", o.M, "parking spaces (overrides the file)");
    sub->add_option("--NF", o.NF, "eFHV fleet size (overrides the file)");
  };
  auto* eq = app.add_subcommand("equilibrium", "solve one equilibrium");
  auto* op = app.add_subcommand("optimize-parking", "parking supply minimising system cost");
  auto* of = app.add_subcommand("optimize-fleet", "fleet size minimising system cost");
  auto* sw = app.add_subcommand("sweep", "evaluate an equilibrium over a grid");
  auto* vf = app.add_subcommand("verify", "solve and cross-check with the queue simulator");
  for (auto* sub : {eq, op, of, sw, vf}) common(sub);
  for (auto* sub : {eq, sw, vf}) {
    sub->add_option("--regime", o.regime, "bimodal | bimodal-reserved | multimodal | reserved");
  }
  for (auto* sub : {eq, op, of, sw, vf}) sub->add_option("--out", o.out, "CSV output path");
  eq->add_flag("--verify", o.verify, "also run the simulator cross-check");
  for (auto* sub : {eq, vf}) sub->add_option("--trace", o.trace, "write simulated cumulative curves as CSV");
  sw->add_option("--grid", o.grid, "lo:hi:step")->required();
  sw->add_option("--control", o.control, "M or NF");
  for (auto* sub : {op, of}) sub->add_option("--oracle-step", o.oracle_step, "grid oracle resolution");

  std::vector<std::string> argv_s = {"commute"};
  argv_s.insert(argv_s.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_s) argv.push_back(a.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? kExitOk : kExitInput;
  }

  try {
    if (eq->parsed()) return cmd_equilibrium(o, out);
    if (op->parsed()) return cmd_optimize_parking(o, out);
    if (of->parsed()) return cmd_optimize_fleet(o, out);
    if (sw->parsed()) return cmd_sweep(o, out);
    if (vf->parsed()) return cmd_verify(o, out);
  } catch (const ModelError& e) {
    err << "error: " << e.what() << '\n';
    return e.code() == ErrorCode::VerificationFailed ? kExitVerify : kExitInput;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitInternal;
}

}  // namespace commute::cli
