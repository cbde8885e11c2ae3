#pragma once

// Two-term expansion of e^{-U^m} at infinity:
//   det_m(f) = lambda_{n+1-m}...lambda_n D^2 |z|^{2 S_m}
//              (1 + (2 D_1 / D)(alpha cos t + beta sin t)/r + O(r^-2))
// where the 1/r term is present only when n+1-m is in I_2, with
// (alpha, beta) the real and imaginary parts of c_{n+1-m, n-m}.
// e^{-U^m} carries the extra constant factor 2^{m(m-1)}.

#include <optional>
#include <vector>

#include <nlohmann/json.hpp>

#include "toda/cartan.hpp"
#include "toda/solution.hpp"

namespace toda {

// S_m = s_{n+1-m} + ... + s_n - m(m-1)/2.
double growth_exponent(const CartanData& cd, int m);

// det[ prod_{j<p}(s_c - j) ] over columns c = n+1-m..n, i.e. prod_{i<j}(s_j - s_i).
double product_D(const CartanData& cd, int m);

// Same determinant with the first column s_{n+1-m} replaced by s_{n-m}
// (s_0 = -gamma^1, the exponent of q_0). Defined for 1 <= m <= n.
double product_D1(const CartanData& cd, int m);

struct ExpansionReport {
  int m = 0;
  double S_m = 0.0;
  double D = 0.0;
  double D1 = 0.0;
  double leading = 0.0;        // coefficient of |z|^{2 S_m} in det_m(f)
  double normalization = 1.0;  // 2^{m(m-1)}: e^{-U^m} = normalization * det_m(f)
  bool first_order_present = false;
  std::optional<double> alpha, beta;
  double first_order_factor = 0.0;  // 2 D_1 / D
  double predicted_cos = 0.0;       // coefficient of cos(t)/r
  double predicted_sin = 0.0;

  bool fitted = false;
  double fitted_S = 0.0;
  double fitted_leading = 0.0;
  double fitted_cos = 0.0;
  double fitted_sin = 0.0;
  std::optional<double> fitted_alpha, fitted_beta;
  double fit_residual = 0.0;  // rms of the least-squares residual in log det_m(f)
  double radius_min = 0.0, radius_max = 0.0;
};

ExpansionReport predict_expansion(const TodaSolution& sol, int m);

struct FitGrid {
  std::vector<double> radii;
  int angles = 16;
  // Besides {1, cos/r, sin/r}, fit the next-order terms {r^-2, cos 2t/r^2,
  // sin 2t/r^2, cos t/r^3, sin t/r^3} so they do not leak into the first-order estimate.
  bool nuisance_terms = true;

  // `per_decade` log-spaced radii covering [r_min, r_max].
  static FitGrid log_spaced(double r_min, double r_max, int per_decade = 8, int angles = 16);
};

// Least-squares fit of log det_m(f) - 2 S_m log r. The exponent is checked
// separately by the slope of the ring-averaged log det between the two largest radii.
// ConfigurationError if the radii span less than one decade or fewer than 4 angles are requested.
ExpansionReport fit_expansion(const TodaSolution& sol, int m, const FitGrid& grid);

void to_json(nlohmann::json& j, const ExpansionReport& r);

}  // namespace toda
