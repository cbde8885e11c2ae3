#pragma once

// Run configuration: strict JSON, unknown keys rejected.

#include <complex>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "toda/params.hpp"
#include "toda/solution.hpp"

namespace todacli {

// Malformed JSON or a schema violation (unknown key, wrong type). Exit code 2.
class ConfigParseError : public std::runtime_error {
 public:
  ConfigParseError(const std::string& what, int line = 0, int column = 0)
      : std::runtime_error(what), line_(line), column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_, column_;
};

struct ResidualGrid {
  int points = 50;
  double r_min = 0.1, r_max = 10.0;
  double h = 1e-3;
  // Steps (as fractions of |z|) for the convergence-order measurement.
  std::vector<double> order_h{0.04, 0.02, 0.01};
  int order_points = 5;
  double decay_radius = 1e4;
};

struct MassGrid {
  double radius = 1e3;
  int angles = 64;
  bool doubling_check = true;
};

struct ExpandGrid {
  double r_min = 1e3, r_max = 1e4;
  int per_decade = 8;
  int angles = 16;
};

struct LinearizeGrid {
  int points = 30;
  double r_min = 0.3, r_max = 3.0;
  double h = 3e-3;
  double param_step = 1e-2;
  std::vector<double> decay_radii{1e2, 2e2, 5e2, 1e3, 2e3};
  double amplitude_radius = 1e3;
  double corrupt_factor = 1.1;
  std::vector<std::string> params;  // empty: every lambda_k and every admissible alpha/beta
};

struct HbarSpec {
  int component = 1;  // 1..n
  double c0 = 0, c1 = 0, c2 = 0, c11 = 0, c12 = 0, c22 = 0;
};

struct IdentityGrid {
  double green_radius = 2.0;
  int green_points = 50;
  double ibp_radius = 1e3;
  std::vector<double> orth_radii{1e2, 3e2, 1e3, 3e3};
  std::vector<HbarSpec> hbar;  // extra fields for the integration-by-parts check
};

struct Tolerances {
  double lambda_product = 1e-12;
  double realness = 1e-10;
  double cut = 1e-10;
  double direct_route = 1e-8;
  double closed_form = 1e-8;
  double radial_spread = 1e-10;
  double residual = 1e-6;
  double order_min = 4.0;
  double decay_slope = 0.01;
  double mass = 1e-5;
  double expand_S = 1e-6;
  double expand_leading = 1e-4;
  double expand_first = 1e-3;
  double expand_absent = 1e-6;
  double linearize = 1e-5;
  double control_ratio = 1e3;
  double control_min = 1e-2;
  double dual_route = 1e-6;
  double decay_amplitude = 0.02;
  double mode_leak = 1e-6;
  double cross_component = 1e-4;
  double decay_exponent_min = 1.9;
  double green = 1e-12;
  double delta = 1e-6;
  double ibp_abs = 1e-5;
  double ibp_rel = 1e-3;
  double cross_response = 1e-4;
  double model_integral = 1e-10;
};

inline const std::vector<std::string>& all_checks() {
  static const std::vector<std::string> v{"construct", "residual", "mass",
                                          "expand",    "linearize", "identities"};
  return v;
}

struct RunConfig {
  std::string name;
  int n = 0;
  std::vector<double> gamma;
  std::optional<std::vector<double>> lambda;  // nullopt: "auto"
  std::vector<std::tuple<int, int, std::complex<double>>> c;
  bool autonormalize = false;
  toda::Precision precision = toda::Precision::Double;
  std::uint64_t seed = 0;
  std::vector<std::string> checks = all_checks();
  bool csv = true;

  ResidualGrid residual;
  MassGrid mass;
  ExpandGrid expand;
  LinearizeGrid linearize;
  IdentityGrid identities;
  Tolerances tol;
};

// Parses the document. Throws ConfigParseError (syntax, with line/column;
// schema, with the JSON path).
RunConfig parse_config_text(const std::string& text);
RunConfig parse_config_file(const std::string& path);

// Builds and validates the solution parameters. Throws toda::ValidationError
// naming the offending field.
struct Prepared {
  toda::CartanData cd;
  toda::SolutionParams params;
  std::vector<std::string> coerced;
};
Prepared prepare(const RunConfig& cfg);

// Echo of the configuration as stored in report.json.
nlohmann::json to_json(const RunConfig& cfg);

}  // namespace todacli
