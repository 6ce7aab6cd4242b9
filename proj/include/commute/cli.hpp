#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "commute/outcome.hpp"
#include "commute/scenario.hpp"

namespace commute::cli {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;   // unreadable scenario, invalid parameters or options
constexpr int kExitVerify = 3;  // simulator disagrees with the closed form
constexpr int kExitInternal = 1;

enum class Regime { Bimodal, BimodalReserved, Multimodal, Reserved };

Regime parse_regime(const std::string& name);
std::string to_string(Regime r);

struct Grid {
  double lo = 0.0;
  double hi = 0.0;
  double step = 0.0;
  std::vector<double> points() const;
};

/// "lo:hi:step"; throws ValidationError when malformed, step <= 0 or hi < lo.
Grid parse_grid(const std::string& text);

struct Solved {
  EquilibriumOutcome eq;
  std::vector<std::pair<std::string, std::string>> extras;  // regime-specific summary rows
};

/// Dispatches to the regime's solver. Missing M means unconstrained parking
/// for the bimodal regimes; multimodal and reserved need it. NF defaults to 0.
Solved solve_regime(const ScenarioParams& p, Regime r, std::optional<double> M, std::optional<double> NF);

/// Fixed 6-significant-digit formatting used for every printed number.
std::string fmt(double v);

/// Runs one command. `args` excludes the program name. Returns the exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace commute::cli
