#include "commute/scenario_io.hpp"

#include <array>
#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "commute/errors.hpp"

namespace commute {

namespace {

constexpr std::array<const char*, 12> kRequired = {"alpha", "beta", "gamma", "s", "theta", "R",
                                                   "F",     "W",    "S0",    "eps", "N", "t_star"};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void parse_error(int line, const std::string& what) {
  std::ostringstream os;
  os << "line " << line << ": " << what;
  throw ModelError(ErrorCode::ParseError, os.str());
}

double to_number(const std::string& text, int line) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size() || errno == ERANGE) {
    parse_error(line, "not a number: '" + text + "'");
  }
  return v;
}

}  // namespace

ScenarioParams parse_scenario(std::istream& in) {
  std::map<std::string, double> values;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string text = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (text.empty()) continue;
    const auto eq = text.find('=');
    if (eq == std::string::npos) parse_error(line, "expected 'key = value'");
    const std::string key = trim(text.substr(0, eq));
    const std::string val = trim(text.substr(eq + 1));
    bool known = key == "M" || key == "NF";
    for (const char* k : kRequired) known = known || key == k;
    if (!known) parse_error(line, "unknown key '" + key + "'");
    if (values.count(key)) parse_error(line, "duplicate key '" + key + "'");
    values[key] = to_number(val, line);
  }

  for (const char* k : kRequired) {
    if (!values.count(k)) throw ModelError(ErrorCode::ParseError, std::string("missing key '") + k + "'");
  }
  ScenarioParams p;
  p.alpha = values["alpha"];
  p.beta = values["beta"];
  p.gamma = values["gamma"];
  p.s = values["s"];
  p.theta = values["theta"];
  p.R = values["R"];
  p.F = values["F"];
  p.W = values["W"];
  p.S0 = values["S0"];
  p.eps = values["eps"];
  p.N = values["N"];
  p.t_star = values["t_star"];
  if (values.count("M")) p.M = values["M"];
  if (values.count("NF")) p.NF = values["NF"];
  return p;
}

ScenarioParams load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ModelError(ErrorCode::ParseError, "cannot open scenario file '" + path + "'");
  return parse_scenario(in);
}

void write_scenario(std::ostream& out, const ScenarioParams& p) {
  out << std::setprecision(17);
  out << "alpha = " << p.alpha << "\nbeta = " << p.beta << "\ngamma = " << p.gamma << "\ns = " << p.s
      << "\ntheta = " << p.theta << "\nR = " << p.R << "\nF = " << p.F << "\nW = " << p.W << "\nS0 = " << p.S0
      << "\neps = " << p.eps << "\nN = " << p.N << "\nt_star = " << p.t_star << '\n';
  if (p.M) out << "M = " << *p.M << '\n';
  if (p.NF) out << "NF = " << *p.NF << '\n';
}

}  // namespace commute
