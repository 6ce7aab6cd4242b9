#pragma once

// Shared scenarios and independent numerical oracles for the unit tests.
// Nothing here calls the library's closed forms: costs are rewritten from the
// model primitives and thresholds are found by root finding / minimisation.

#include <cmath>
#include <functional>
#include <random>

#include "commute/scenario.hpp"

namespace fx {

using commute::ScenarioParams;

inline ScenarioParams base() {
  ScenarioParams p;
  p.alpha = 0.3;
  p.beta = 0.1;
  p.gamma = 0.4;
  p.s = 200;
  p.theta = 0.001;
  p.R = 1;
  p.F = 4;
  p.W = 3;
  p.S0 = 3;
  p.eps = 0;
  p.N = 100000;
  p.t_star = 540;
  return p;
}

// Ride-sourcing dearer than the W0 threshold, so autos and eFHVs coexist.
inline ScenarioParams costly_efhv() {
  ScenarioParams p = base();
  p.W = 6;
  return p;
}

inline ScenarioParams scale_money(ScenarioParams p, double k) {
  p.alpha *= k;
  p.beta *= k;
  p.gamma *= k;
  p.theta *= k;
  p.R *= k;
  p.F *= k;
  p.W *= k;
  return p;
}

inline bool rel_close(double a, double b, double tol) { return std::abs(a - b) <= tol * std::max(1.0, std::abs(b)); }

// Root of f on [lo, hi]; f(lo) and f(hi) must differ in sign.
inline double bisect(const std::function<double(double)>& f, double lo, double hi, int iters = 200) {
  double flo = f(lo);
  for (int i = 0; i < iters; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((fm <= 0) == (flo <= 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

inline double golden_min(const std::function<double(double)>& f, double lo, double hi, int iters = 300) {
  const double g = (std::sqrt(5.0) - 1) / 2;
  double a = lo, b = hi;
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = f(c), fd = f(d);
  for (int i = 0; i < iters; ++i) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

// --- Costs written out from the model primitives --------------------------

inline double transit(const ScenarioParams& p, double riders) { return p.R + p.theta * riders; }

// Unconstrained auto cost: equal-cost departure window of length NC/s, the
// first driver only early, the last only late, plus search and the fee.
inline double auto_unconstrained(const ScenarioParams& p, double NC) {
  const double window = NC / p.s;
  const double early = p.gamma / (p.beta + p.gamma) * window;  // first arrival's earliness
  const double search_growth = p.beta * (p.alpha + p.gamma) / (p.beta + p.gamma) * p.eps;
  return p.beta * early + p.alpha * p.S0 + search_growth + p.F;
}

// Reserved-auto cost when an idle gap separates eFHVs from autos.
inline double reserved_gap(const ScenarioParams& p, double NC) {
  return p.beta * p.gamma / (p.beta + p.gamma) * NC / p.s + p.alpha * p.S0 + p.F;
}

// Reserved-auto cost when autos queue straight behind the eFHVs. The last
// driver meets an empty queue and is late by (NC + NF)/s minus the eFHV
// block's lead, which is (Pf - W)/beta before t*.
inline double reserved_queue(const ScenarioParams& p, double NC, double NF) {
  const double Pf = transit(p, p.N - NF - NC);
  const double t_first = p.t_star - (Pf - p.W) / p.beta;
  const double last_exit = t_first + (NC + NF) / p.s;
  const double late = last_exit + p.S0 - p.t_star;
  return p.gamma * late + p.alpha * p.S0 + p.F;
}

inline double tc_gap(const ScenarioParams& p, double NC, double NF) {
  return reserved_gap(p, NC) * NC + transit(p, p.N - NF - NC) * (p.N - NC);
}

inline double tc_queue(const ScenarioParams& p, double NC, double NF) {
  return reserved_queue(p, NC, NF) * NC + transit(p, p.N - NF - NC) * (p.N - NC);
}

// --- Random scenarios ------------------------------------------------------

// eFHVs beat driving (W <= W0), all parking reserved.
inline ScenarioParams random_reserved(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (;;) {
    ScenarioParams p = base();
    p.alpha = 0.2 + 0.3 * u(rng);
    p.beta = p.alpha * (0.2 + 0.6 * u(rng));
    p.gamma = p.alpha * (1.2 + 1.8 * u(rng));
    p.s = 100 + 300 * u(rng);
    p.theta = 0.0005 + 0.0015 * u(rng);
    p.R = 0.5 + 1.5 * u(rng);
    p.F = 2 + 4 * u(rng);
    p.S0 = 1 + 4 * u(rng);
    p.N = 50000 + 150000 * u(rng);
    const double W0 = (p.alpha - p.beta) * p.S0 + p.F;
    p.W = W0 * (0.3 + 0.65 * u(rng));
    if (p.W < p.R + p.theta * p.N) return p;
  }
}

}  // namespace fx
