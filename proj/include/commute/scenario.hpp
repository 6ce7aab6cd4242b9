#pragma once

#include <optional>
#include <vector>
#include <string>

namespace commute {

// Exogenous inputs of the corridor model. Money in currency units, time in
// minutes, populations are continuous (fluid) quantities.
struct ScenarioParams {
  double alpha = 0.0;   // value of travel time
  double beta = 0.0;    // early-arrival penalty
  double gamma = 0.0;   // late-arrival penalty
  double s = 0.0;       // bottleneck capacity, veh/min
  double theta = 0.0;   // transit crowding slope
  double R = 0.0;       // transit fare
  double F = 0.0;       // one-off parking fee
  double W = 0.0;       // eFHV fare + waiting cost
  double S0 = 0.0;      // initial parking search time
  double eps = 0.0;     // search-time growth coefficient
  double N = 0.0;       // total commuters
  double t_star = 0.0;  // preferred arrival time
  std::optional<double> M;   // parking spaces
  std::optional<double> NF;  // eFHV fleet size
};

/// Transit cost p^T(n) = R + theta * n.
inline double transit_cost(const ScenarioParams& p, double riders) { return p.R + p.theta * riders; }

/// Returns `p` unchanged if every model invariant holds, otherwise throws
/// ModelError (OrderingViolation, NonPositiveCapacity, NegativeParameter,
/// FareDominance).
ScenarioParams validate(const ScenarioParams& p);

/// Every threshold and composite constant of the model. Fields that depend on
/// the parking supply are only present when an M was supplied.
struct DerivedConstants {
  double C = 0.0;  // (beta+gamma) theta s + beta gamma
  double W0 = 0.0, W1 = 0.0, W2 = 0.0;
  double Mu2 = 0.0;  // parking level where queue-clearing patterns end

  // Reserved-parking block, evaluated at the fleet size passed to derive().
  double D = 0.0, E = 0.0, A = 0.0, B = 0.0;
  double NF1 = 0.0, NF2 = 0.0, NF3 = 0.0, NF4 = 0.0, NF5 = 0.0, NF6 = 0.0;
  std::optional<double> NF7, NF8, NF9;
  double M1 = 0.0, M2 = 0.0, M3 = 0.0, M4 = 0.0, M5 = 0.0, M6 = 0.0, M7 = 0.0;

  double NC0 = 0.0;  // virtual parking demand, clamped to [0, N]
  double NF0 = 0.0;  // virtual eFHV demand, clamped to [0, N]
  double N0 = 0.0;   // road users when the queue never clears, clamped to [0, N]
  double K = 0.0;

  struct Diagnostics {
    double NC0_raw = 0.0, NF0_raw = 0.0, N0_raw = 0.0;
    bool NC0_clamped = false, NF0_clamped = false, N0_clamped = false;
    // Thresholds of the unlimited-eFHV analysis that are not computed.
    std::vector<std::string> unsupported = {"M_1^u", "M_3^u", "M_4^u", "M_5^u", "W_3"};
  } diagnostics;
};

DerivedConstants derive(const ScenarioParams& p, double NF, std::optional<double> M = std::nullopt);

// Individual closed forms, shared by the modules that need only one of them.
double composite_c(const ScenarioParams& p);
double virtual_parking_demand_raw(const ScenarioParams& p, double eps);
double virtual_parking_demand(const ScenarioParams& p, double eps);  // clamped
double virtual_efhv_demand_raw(const ScenarioParams& p);
double queue_constant_k(const ScenarioParams& p);
double never_clearing_road_users_raw(const ScenarioParams& p);

}  // namespace commute
