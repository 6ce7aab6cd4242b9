#include "commute/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "commute/errors.hpp"

namespace commute {

namespace {

void require_nonnegative(double v, const char* name) {
  if (!(v >= 0.0) || !std::isfinite(v)) {
    throw ModelError(ErrorCode::NegativeParameter, std::string(name) + " must be finite and >= 0");
  }
}

double clamp_population(double raw, double N, bool& clamped) {
  const double v = std::clamp(raw, 0.0, N);
  clamped = v != raw;
  return v;
}

}  // namespace

ScenarioParams validate(const ScenarioParams& p) {
  if (!(p.gamma > p.alpha && p.alpha > p.beta && p.beta > 0.0)) {
    std::ostringstream os;
    os << "need gamma > alpha > beta > 0, got alpha=" << p.alpha << " beta=" << p.beta
       << " gamma=" << p.gamma;
    throw ModelError(ErrorCode::OrderingViolation, os.str());
  }
  if (!(p.s > 0.0) || !std::isfinite(p.s)) {
    throw ModelError(ErrorCode::NonPositiveCapacity, "bottleneck capacity s must be > 0");
  }
  if (!(p.N > 0.0) || !std::isfinite(p.N)) {
    throw ModelError(ErrorCode::NegativeParameter, "N must be > 0");
  }
  require_nonnegative(p.theta, "theta");
  require_nonnegative(p.S0, "S0");
  require_nonnegative(p.eps, "eps");
  require_nonnegative(p.R, "R");
  require_nonnegative(p.F, "F");
  require_nonnegative(p.W, "W");
  if (!std::isfinite(p.t_star)) throw ModelError(ErrorCode::NegativeParameter, "t_star must be finite");
  if (p.M) require_nonnegative(*p.M, "M");
  if (p.NF) require_nonnegative(*p.NF, "NF");
  if (!(p.W < p.R + p.theta * p.N)) {
    std::ostringstream os;
    os << "W=" << p.W << " must be below R + theta*N = " << p.R + p.theta * p.N;
    throw ModelError(ErrorCode::FareDominance, os.str());
  }
  return p;
}

double composite_c(const ScenarioParams& p) {
  return (p.beta + p.gamma) * p.theta * p.s + p.beta * p.gamma;
}

// Fixed point of auto cost = transit cost. The search-growth term raises the
// auto cost, so it lowers the demand.
double virtual_parking_demand_raw(const ScenarioParams& p, double eps) {
  const double bg = p.beta + p.gamma;
  return p.s * bg / composite_c(p) *
         (p.theta * p.N + p.R - p.alpha * p.S0 - p.F - p.beta * (p.alpha + p.gamma) / bg * eps);
}

double virtual_parking_demand(const ScenarioParams& p, double eps) {
  return std::clamp(virtual_parking_demand_raw(p, eps), 0.0, p.N);
}

double virtual_efhv_demand_raw(const ScenarioParams& p) {
  return p.s * (p.beta + p.gamma) * (p.R - p.W + p.theta * p.N) / composite_c(p);
}

double queue_constant_k(const ScenarioParams& p) {
  const double bg = p.beta + p.gamma;
  return (p.alpha - p.beta) * p.gamma / bg * p.S0 + p.beta / bg * p.W + p.gamma / bg * p.F;
}

double never_clearing_road_users_raw(const ScenarioParams& p) {
  return (p.beta + p.gamma) * p.s / composite_c(p) * (p.R + p.theta * p.N - queue_constant_k(p));
}

DerivedConstants derive(const ScenarioParams& p, double NF, std::optional<double> M) {
  DerivedConstants d;
  const double a = p.alpha, b = p.beta, g = p.gamma, s = p.s, th = p.theta, N = p.N;
  const double bg = b + g;

  d.C = composite_c(p);
  d.W0 = (a - b) * p.S0 + p.F;
  d.W1 = (a - b) * (p.S0 + p.eps) + p.F;
  d.W2 = (a + g) * (p.S0 + p.eps) + p.F;
  d.Mu2 = (p.W - d.W0) * s / b;

  d.D = d.W0 - p.W;
  d.E = th * N + p.R - p.W - b * p.S0;
  d.A = (d.E - d.D + th * (N - NF)) * s;
  d.B = (d.E - th * NF) * s - b * NF;

  d.NF1 = (d.D + d.E - th * N) / (2.0 * b + th * s) * s;
  d.NF2 = (b * (d.D + d.E - th * N) + g * d.E) / (2.0 * b * b + d.C) * s;
  d.NF3 = d.D / b * s;
  d.NF4 = (d.E - d.D) / th;
  d.NF5 = (b * (d.E - d.D) + g * d.E) / d.C * s;

  d.M1 = bg / 2.0 * d.A / d.C;
  d.M2 = bg * d.B / d.C;
  d.M3 = (b * d.A + g * d.B) / (2.0 * d.C);
  d.M4 = bg * (d.A - th * N * s) / d.C;
  d.M5 = d.NF5 - NF;
  d.M6 = b * th * N * s / d.C;
  d.M7 = d.NF5 - d.NF3;
  d.NF6 = d.NF5 - d.M6;

  if (!M) M = p.M;
  if (M) {
    d.NF7 = (d.E * s - d.C / bg * *M) / (b + th * s);
    d.NF8 = d.NF4 - d.C / (bg * th * s) * *M;
    d.NF9 = d.NF5 - *M;
  }

  d.K = queue_constant_k(p);
  d.diagnostics.NC0_raw = virtual_parking_demand_raw(p, p.eps);
  d.diagnostics.NF0_raw = virtual_efhv_demand_raw(p);
  d.diagnostics.N0_raw = never_clearing_road_users_raw(p);
  d.NC0 = clamp_population(d.diagnostics.NC0_raw, N, d.diagnostics.NC0_clamped);
  d.NF0 = clamp_population(d.diagnostics.NF0_raw, N, d.diagnostics.NF0_clamped);
  d.N0 = clamp_population(d.diagnostics.N0_raw, N, d.diagnostics.N0_clamped);
  return d;
}

}  // namespace commute
