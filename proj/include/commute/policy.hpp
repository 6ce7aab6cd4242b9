#pragma once

#include <optional>
#include <string>
#include <vector>

#include "commute/reserved.hpp"
#include "commute/scenario.hpp"

namespace commute::policy {

enum class Control { Parking, Fleet };

struct GridPoint {
  double control = 0.0;
  double NC = 0.0;
  double NT = 0.0;
  double Pr = 0.0;
  double Pf = 0.0;
  double TC = 0.0;
  reserved::CostCase cost_case = reserved::CostCase::i;
  bool idle_free = true;  // every parking space is used
};

struct GridResult {
  double argmin = 0.0;
  double min_TC = 0.0;
  std::vector<GridPoint> curve;
};

/// Brute-force evaluation of the reserved-regime total cost on
/// lo, lo+step, ..., <= hi. The other control is held at `fixed`. With
/// `idle_free_only`, points that leave parking unused are excluded from the
/// minimisation (they stay in the curve). Ties go to the smaller control.
/// Throws ValidationError when step <= 0 or hi < lo.
GridResult grid_oracle(const ScenarioParams& p, Control control, double fixed, double lo, double hi,
                       double step, bool idle_free_only = false);

struct PolicyResult {
  double argopt = 0.0;
  int branch = 0;
  std::string branch_name;
  double TC_at_opt = 0.0;
  std::optional<double> eta;           // fleet policy only
  std::optional<double> TC_benchmark;  // fleet policy only: TC with no eFHVs
  double oracle_argopt = 0.0;
  double oracle_TC = 0.0;
  double oracle_gap = 0.0;
  double grid_step = 1.0;
  bool branch_mismatch = false;  // closed form and grid disagree beyond one step
};

/// Parking supply minimising system cost for a given fleet.
PolicyResult optimal_parking(const ScenarioParams& p, double NF, double oracle_step = 1.0);

/// Fleet size minimising system cost for a given parking supply, with every
/// space in use. The grid oracle is restricted to idle-free points to match.
PolicyResult optimal_fleet(const ScenarioParams& p, double M, double oracle_step = 1.0);

enum class Derivative { dTCi_dNC, dTCii_dNC, dTCi_dNF, dTCii_dNF };

/// Closed-form partial derivatives of the two total-cost branches.
double tc_derivative(const ScenarioParams& p, double NC, double NF, Derivative which);

}  // namespace commute::policy
