#pragma once

#include <optional>
#include <string>
#include <vector>

#include "commute/outcome.hpp"
#include "commute/scenario.hpp"

namespace commute::multimodal {

// Qualitative equilibrium configurations with unlimited eFHV supply and
// first-come-first-served parking.
//   a/g/h  cost parity before parking fills, queue never clears
//   c/e/f  parking fills first, queue never clears
//   b/d    parking fills first, queue clears before the first eFHV
//   i      autos only          j  eFHVs only
// Within each family the letter encodes whether the last auto and the first
// eFHV arrive early or late.
enum class Pattern { a, b, c, d, e, f, g, h, i, j };

char tag(Pattern p);

enum class Family { QueueNeverClears, QueueClears, AutosOnly, EfhvOnly };
Family family_of(Pattern p);

struct Timeline {
  double t1 = 0.0;                // first departure
  double t2 = 0.0;                // first eFHV departure
  std::optional<double> t3c;      // on-time auto departure, if within the auto block
  std::optional<double> t3f;      // on-time eFHV departure, if within the eFHV block
  double t4 = 0.0;                // last departure
  double tcl = 0.0;               // last auto departure
};

struct MultimodalOutcome {
  Pattern pattern = Pattern::j;
  bool boundary_tie = false;  // more than one candidate family fit; lowest letter kept
  double NC = 0.0, NF = 0.0, NT = 0.0;
  double P = 0.0;
  double TC = 0.0;
  double delta = 0.0;  // TC minus the TC of the auto+transit equilibrium at the same M
  double M = 0.0;
  double oversupply = 0.0;
  double queue_at_first_efhv = 0.0;
  bool nf0_clamped = false;
  Timeline timeline;
  std::optional<ModeBlock> auto_block;
  std::optional<ModeBlock> efhv_block;
};

/// N^0 = (beta+gamma) s / C * (R + theta N - K), clamped to [0, N].
/// Throws PrecondModeMix when W <= W0 (nobody drives).
double total_road_users(const ScenarioParams& p);

/// Equilibrium with `M` non-reserved spaces, M < NC0.
MultimodalOutcome solve(const ScenarioParams& p, double M);

/// Every candidate family that is self-consistent for (p, M), in pattern
/// order. A well-posed input yields exactly one.
std::vector<MultimodalOutcome> feasible_candidates(const ScenarioParams& p, double M);

struct DeltaReport {
  double delta = 0.0;
  Pattern pattern = Pattern::j;
  std::string sign_note;
};

/// TC with ride-sourcing minus TC without it (non-reserved bimodal at the same M).
DeltaReport system_cost_delta(const ScenarioParams& p, double M);

EquilibriumOutcome to_equilibrium(const MultimodalOutcome& o);

}  // namespace commute::multimodal
