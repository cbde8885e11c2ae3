#include "toda/asymptotics.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/Dense>

#include "toda/errors.hpp"

namespace toda {

namespace {

void check_m(const CartanData& cd, int m) {
  if (m < 1 || m > cd.n())
    throw RangeError("m = " + std::to_string(m) + " outside 1.." + std::to_string(cd.n()));
}

double vandermonde(const std::vector<long double>& x) {
  long double v = 1.0L;
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = i + 1; j < x.size(); ++j) v *= x[j] - x[i];
  return static_cast<double>(v);
}

}  // namespace

double growth_exponent(const CartanData& cd, int m) {
  check_m(cd, m);
  long double acc = 0.0L;
  for (int i = cd.n() + 1 - m; i <= cd.n(); ++i) acc += cd.s_extended(i);
  return static_cast<double>(acc - 0.5L * m * (m - 1));
}

double product_D(const CartanData& cd, int m) {
  check_m(cd, m);
  std::vector<long double> cols;
  for (int i = cd.n() + 1 - m; i <= cd.n(); ++i) cols.push_back(cd.s_extended(i));
  return vandermonde(cols);
}

double product_D1(const CartanData& cd, int m) {
  check_m(cd, m);
  std::vector<long double> cols{cd.s_extended(cd.n() - m)};
  for (int i = cd.n() + 2 - m; i <= cd.n(); ++i) cols.push_back(cd.s_extended(i));
  return vandermonde(cols);
}

ExpansionReport predict_expansion(const TodaSolution& sol, int m) {
  const auto& cd = sol.cartan();
  check_m(cd, m);
  const int n = cd.n();
  ExpansionReport r;
  r.m = m;
  r.S_m = growth_exponent(cd, m);
  r.D = product_D(cd, m);
  r.D1 = product_D1(cd, m);
  double lead = r.D * r.D;
  for (int i = n + 1 - m; i <= n; ++i) lead *= sol.params().lambda[i];
  r.leading = lead;
  r.normalization = std::ldexp(1.0, m * (m - 1));
  r.first_order_factor = 2.0 * r.D1 / r.D;
  const int block = n + 1 - m;
  r.first_order_present = cd.in_I2(block);
  if (r.first_order_present) {
    r.alpha = sol.params().alpha(block);
    r.beta = sol.params().beta(block);
    r.predicted_cos = r.first_order_factor * *r.alpha;
    r.predicted_sin = r.first_order_factor * *r.beta;
  }
  return r;
}

FitGrid FitGrid::log_spaced(double r_min, double r_max, int per_decade, int angles) {
  if (!(r_min > 0.0) || !(r_max > r_min) || per_decade < 1)
    throw ConfigurationError("FitGrid: need 0 < r_min < r_max and per_decade >= 1");
  FitGrid g;
  g.angles = angles;
  const double decades = std::log10(r_max / r_min);
  const int steps = std::max(1, static_cast<int>(std::ceil(decades * per_decade - 1e-9)));
  for (int k = 0; k <= steps; ++k)
    g.radii.push_back(r_min * std::pow(r_max / r_min, static_cast<double>(k) / steps));
  return g;
}

ExpansionReport fit_expansion(const TodaSolution& sol, int m, const FitGrid& grid) {
  ExpansionReport r = predict_expansion(sol, m);
  if (grid.radii.size() < 2) throw ConfigurationError("fit_expansion: need at least two radii");
  if (grid.angles < 4) throw ConfigurationError("fit_expansion: need at least four angles");
  const auto [lo, hi] = std::minmax_element(grid.radii.begin(), grid.radii.end());
  if (!(*lo > 0.0) || *hi / *lo < 10.0 * (1.0 - 1e-12))
    throw ConfigurationError("fit_expansion: radii must span at least one decade");

  const int na = grid.angles;
  const double cut = sol.branch().cut_angle;
  const int cols = grid.nuisance_terms ? 8 : 3;
  const std::size_t rows = grid.radii.size() * na;
  Eigen::MatrixXd A(rows, cols);
  Eigen::VectorXd y(rows);
  std::vector<double> ring_mean(grid.radii.size(), 0.0);

  // Columns are scaled by powers of r_min so they stay O(1).
  const double r0 = *lo;
  std::size_t row = 0;
  for (std::size_t k = 0; k < grid.radii.size(); ++k) {
    const double rad = grid.radii[k];
    const double x = r0 / rad;
    for (int a = 0; a < na; ++a) {
      const double t = cut + (a + 0.5) * 2.0 * std::numbers::pi / na;
      const double v = sol.log_det(m, std::polar(rad, t));
      ring_mean[k] += v / na;
      y(row) = v - 2.0 * r.S_m * std::log(rad);
      A(row, 0) = 1.0;
      A(row, 1) = std::cos(t) * x;
      A(row, 2) = std::sin(t) * x;
      if (grid.nuisance_terms) {
        A(row, 3) = x * x;
        A(row, 4) = std::cos(2 * t) * x * x;
        A(row, 5) = std::sin(2 * t) * x * x;
        A(row, 6) = std::cos(t) * x * x * x;
        A(row, 7) = std::sin(t) * x * x * x;
      }
      ++row;
    }
  }
  const Eigen::VectorXd coef = A.colPivHouseholderQr().solve(y);
  r.fit_residual = std::sqrt((A * coef - y).squaredNorm() / static_cast<double>(rows));
  r.fitted = true;
  r.fitted_leading = std::exp(coef(0));
  r.fitted_cos = coef(1) * r0;
  r.fitted_sin = coef(2) * r0;
  if (r.first_order_present) {
    r.fitted_alpha = r.fitted_cos / r.first_order_factor;
    r.fitted_beta = r.fitted_sin / r.first_order_factor;
  }

  // Slope between the two largest radii.
  std::vector<std::size_t> order(grid.radii.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return grid.radii[a] < grid.radii[b]; });
  const std::size_t k1 = order[order.size() - 2], k2 = order.back();
  r.fitted_S = (ring_mean[k2] - ring_mean[k1]) /
               (2.0 * std::log(grid.radii[k2] / grid.radii[k1]));
  r.radius_min = *lo;
  r.radius_max = *hi;
  return r;
}

void to_json(nlohmann::json& j, const ExpansionReport& r) {
  auto opt = [](const std::optional<double>& v) -> nlohmann::json {
    return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
  };
  j = nlohmann::json{{"m", r.m},
                     {"S_m", r.S_m},
                     {"D", r.D},
                     {"D1", r.D1},
                     {"leading", r.leading},
                     {"normalization", r.normalization},
                     {"first_order_present", r.first_order_present},
                     {"alpha", opt(r.alpha)},
                     {"beta", opt(r.beta)},
                     {"first_order_factor", r.first_order_factor},
                     {"predicted_first", {r.predicted_cos, r.predicted_sin}}};
  if (r.fitted) {
    j["fitted_S"] = r.fitted_S;
    j["fitted_leading"] = r.fitted_leading;
    j["fitted_first"] = {r.fitted_cos, r.fitted_sin};
    j["fitted_alpha"] = opt(r.fitted_alpha);
    j["fitted_beta"] = opt(r.fitted_beta);
    j["fit_residual"] = r.fit_residual;
    j["radii"] = {r.radius_min, r.radius_max};
  }
}

}  // namespace toda
