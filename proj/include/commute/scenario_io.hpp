#pragma once

#include <iosfwd>
#include <string>

#include "commute/scenario.hpp"

namespace commute {

/// Reads `key = value` lines; `#` starts a comment. Keys are the field names
/// of ScenarioParams (alpha, beta, gamma, s, theta, R, F, W, S0, eps, N,
/// t_star; M and NF optional). Unknown, duplicate or missing keys and
/// malformed numbers throw ParseError. The result is not validated.
ScenarioParams parse_scenario(std::istream& in);
ScenarioParams load_scenario(const std::string& path);

void write_scenario(std::ostream& out, const ScenarioParams& p);

}  // namespace commute
