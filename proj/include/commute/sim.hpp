#pragma once

#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "commute/outcome.hpp"
#include "commute/scenario.hpp"

namespace commute::sim {

enum class Mode { Auto, Efhv };

struct Segment {
  double start = 0.0;
  double end = 0.0;
  double auto_rate = 0.0;
  double efhv_rate = 0.0;
};

// Piecewise-constant departure rates. Time not covered by a segment carries no
// departures.
struct DepartureProfile {
  std::vector<Segment> segments;
  double NC = 0.0;
  double NF = 0.0;
  double search_normalizer = 0.0;
  bool reserved_autos = false;

  /// Throws InconsistentOutcome on overlap, negative rates, mixed segments or
  /// rate integrals that miss the declared totals.
  void validate() const;
};

/// Rebuilds the departure profile implied by a solved equilibrium.
DepartureProfile build_profile(const EquilibriumOutcome& outcome);

/// Splits every segment in two; the simulated trace must not change.
DepartureProfile refine(const DepartureProfile& profile);

struct TracePoint {
  double t = 0.0;
  double cum_auto = 0.0;
  double cum_efhv = 0.0;
  double queue = 0.0;
  double cum_exit() const { return cum_auto + cum_efhv - queue; }
};

struct CostSample {
  double t = 0.0;
  Mode mode = Mode::Auto;
  double cost = 0.0;
};

// Exact piecewise-linear trajectory: every quantity is linear between
// consecutive points, and the queue is empty after the last point.
struct SimTrace {
  std::vector<TracePoint> points;
  std::vector<CostSample> samples;
  ScenarioParams params;
  double search_normalizer = 0.0;
  bool reserved_autos = false;

  TracePoint at(double t) const;
  double queue(double t) const { return at(t).queue; }
  double travel_time(double t) const;
  double search_time(double t) const;
  std::vector<double> breakpoints() const;
  /// Maximal intervals strictly between the first departure and the final
  /// queue discharge on which the queue is at most `tol` vehicles.
  std::vector<std::pair<double, double>> queue_zero_intervals(double tol = 1e-9) const;
};

SimTrace simulate(const ScenarioParams& p, const DepartureProfile& profile);

/// Cost a traveller of `mode` would bear departing at `t_dep` on the simulated
/// road. Hypothetical departures do not perturb the queue.
double realized_cost(const SimTrace& trace, Mode mode, double t_dep);

struct ClassCheck {
  Mode mode = Mode::Auto;
  std::size_t samples = 0;
  double expected = 0.0;
  double min_cost = 0.0;
  double max_cost = 0.0;
  double spread_rel = 0.0;     // (max - min) / expected
  double max_error_rel = 0.0;  // max |cost - expected| / expected
};

struct VerificationReport {
  bool pass = true;
  std::vector<ClassCheck> classes;
  std::optional<bool> reserved_not_dearer;  // Pr <= Pf, when both classes are used
  std::size_t probes = 0;
  double min_margin_rel = std::numeric_limits<double>::infinity();
  double worst_probe_t = 0.0;
  Mode worst_probe_mode = Mode::Auto;
  double entry_error = 0.0;  // |entries - (NC + NF)|
  double exit_error = 0.0;   // |exits - entries|
  double min_queue = 0.0;
  std::vector<std::string> failures;
};

struct VerifyOptions {
  double spread_tol = 1e-6;
  double margin_tol = 1e-6;
  std::size_t probe_count = 2000;
  double probe_pad = 60.0;  // minutes either side of the profile
};

VerificationReport verify(const ScenarioParams& p, const EquilibriumOutcome& outcome,
                          const DepartureProfile& profile, const VerifyOptions& opt = {});

/// Convenience: build the profile from the outcome and verify it.
VerificationReport verify(const ScenarioParams& p, const EquilibriumOutcome& outcome);

void write_trace_csv(std::ostream& os, const SimTrace& trace);

}  // namespace commute::sim
