#pragma once

#include <optional>
#include <string_view>

#include "commute/outcome.hpp"
#include "commute/scenario.hpp"

namespace commute::reserved {

// S1: bottleneck idles between the eFHV and auto blocks.
// S2: no idle period, every eFHV arrives early.
// S3: no idle period, some eFHVs arrive late.
enum class Scenario { S1, S2, S3 };

// Which closed form prices the reserved autos: (i) idle gap, (ii) continuous queue.
enum class CostCase { i, ii };

std::string_view to_string(Scenario s);
std::string_view to_string(CostCase c);

struct Classification {
  Scenario scenario = Scenario::S1;
  CostCase cost_case = CostCase::i;
};

struct ClassCosts {
  double Pr = 0.0;         // reserved auto
  double Pf = 0.0;         // eFHV
  double P_transit = 0.0;  // equals Pf
};

struct Timeline {
  double t1 = 0.0;   // first eFHV departure
  double tfl = 0.0;  // S1: last eFHV leaves the bottleneck; S2/S3: last eFHV departs
  double t2 = 0.0;   // first auto departure
  double t4 = 0.0;   // last auto departure
  double efhv_last_departure = 0.0;
  double efhv_last_exit = 0.0;
  std::optional<double> t3c;  // on-time auto departure, inside the auto block
  std::optional<double> t3f;  // on-time eFHV departure, inside the eFHV block
};

struct ReservedOutcome {
  Classification classification;
  double M = 0.0;  // effective supply after capping at NC0
  bool M_capped = false;
  double NF = 0.0;
  double NC = 0.0;
  double NT = 0.0;
  double idle_spaces = 0.0;
  ClassCosts costs;
  double TC = 0.0;
  Timeline timeline;
  std::optional<ModeBlock> auto_block;
  std::optional<ModeBlock> efhv_block;
};

/// Preconditions for every operation below: W <= W0, eps == 0, M >= 0,
/// 0 <= NF <= NF0. M above NC0 is capped at NC0. Violations throw
/// PrecondViolation naming the failed condition.
Classification classify(const ScenarioParams& p, double M, double NF);
double auto_count(const ScenarioParams& p, double M, double NF);
ClassCosts class_costs(const ScenarioParams& p, double M, double NF);
Timeline timeline(const ScenarioParams& p, double M, double NF);
double total_cost(const ScenarioParams& p, double M, double NF);
ReservedOutcome solve(const ScenarioParams& p, double M, double NF);

EquilibriumOutcome to_equilibrium(const ReservedOutcome& o);

// Reserved-auto cost closed forms, exposed for the policy derivatives.
double auto_cost_idle_gap(const ScenarioParams& p, double NC);
double auto_cost_continuous_queue(const ScenarioParams& p, double NC, double NF);

}  // namespace commute::reserved
