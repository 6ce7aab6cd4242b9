#pragma once

#include <algorithm>
#include <limits>
#include <optional>
#include <string>

namespace commute {

// A contiguous departure block of one mode: `early_rate` on [start, on_time),
// `late_rate` on [on_time, end]. `on_time` is the departure whose arrival is
// exactly t*, clamped into the block.
struct ModeBlock {
  double start = 0.0;
  double on_time = 0.0;
  double end = 0.0;
  double early_rate = 0.0;
  double late_rate = 0.0;

  double count() const {
    const double sw = std::clamp(on_time, start, end);
    return early_rate * (sw - start) + late_rate * (end - sw);
  }
};

// Regime-independent view of a solved equilibrium: what the simulator needs to
// rebuild departures and what the verifier checks them against.
struct EquilibriumOutcome {
  std::string regime;
  std::string label;
  double NC = 0.0, NF = 0.0, NT = 0.0;
  double cost_auto = 0.0, cost_efhv = 0.0, cost_transit = 0.0;
  double TC = 0.0;
  std::optional<ModeBlock> auto_block;
  std::optional<ModeBlock> efhv_block;
  double search_normalizer = 0.0;  // denominator of the search-time growth term
  bool reserved_autos = false;     // reserved autos have no search growth
  // Departures after these times cannot use the mode (parking full, fleet exhausted).
  double auto_deadline = std::numeric_limits<double>::infinity();
  double efhv_deadline = std::numeric_limits<double>::infinity();
};

}  // namespace commute
