#pragma once

#include <optional>
#include <utility>

#include "commute/outcome.hpp"
#include "commute/scenario.hpp"

namespace commute::bimodal {

struct DepartureRates {
  double early = 0.0;  // r_c1, autos arriving before t*
  double late = 0.0;   // r_c2, autos arriving after t*
};

/// Auto departure rates at the bottleneck. `normalizer` is the population the
/// search-time growth is spread over (auto count, or parking supply when it binds).
/// Throws DivisionByZeroPopulation when eps > 0 and normalizer == 0.
DepartureRates departure_rates(const ScenarioParams& p, double normalizer);

/// Same with an explicit search coefficient (0 for reserved parking).
DepartureRates departure_rates(const ScenarioParams& p, double normalizer, double eps);

/// Equilibrium auto cost with `NC` drivers and no binding parking constraint.
double auto_cost(const ScenarioParams& p, double NC);
double auto_cost(const ScenarioParams& p, double NC, double eps);

inline double transit_cost(const ScenarioParams& p, double NT) { return commute::transit_cost(p, NT); }

struct BimodalOutcome {
  double NC = 0.0;
  double NT = 0.0;
  double P_auto = 0.0;
  double P_transit = 0.0;
  double TC = 0.0;
  bool binding = false;
  bool reserved = false;
  DepartureRates rates;
  double normalizer = 0.0;
  std::optional<ModeBlock> auto_block;
  double auto_deadline = 0.0;
};

/// Auto + transit equilibrium with `M` parking spaces, all reserved or all
/// first-come-first-served.
BimodalOutcome equilibrium(const ScenarioParams& p, double M, bool reserved);

EquilibriumOutcome to_equilibrium(const BimodalOutcome& o);

/// Auto departure block for `count` drivers who all bear cost `P`, starting
/// from an empty queue. Used by every regime whose autos lead the peak.
ModeBlock auto_block_for_cost(const ScenarioParams& p, double P, double count, DepartureRates rates);

}  // namespace commute::bimodal
