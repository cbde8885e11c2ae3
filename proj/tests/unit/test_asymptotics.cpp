#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "random_params.hpp"
#include "toda/asymptotics.hpp"

namespace {

using testsupport::falling_factorial_det;

std::vector<double> columns(const toda::CartanData& cd, int m, bool first_shifted) {
  const int n = cd.n();
  std::vector<double> e;
  for (int c = n + 1 - m; c <= n; ++c) e.push_back(cd.s(c));
  if (first_shifted) e[0] = cd.s(n - m);
  return e;
}

toda::TodaSolution make(std::vector<double> g, auto&& fill) {
  const int n = static_cast<int>(g.size());
  auto cd = toda::build_cartan(n, g);
  toda::SolutionParams p(n);
  fill(p);
  return toda::TodaSolution(cd, toda::validate_params(cd, p, true).params);
}

}  // namespace

TEST(ProductD, BruteForceOracle) {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + trial % 5;
    std::vector<double> g(n);
    for (auto& x : g) x = testsupport::uniform(rng, 0.0, 2.5);
    const auto cd = toda::build_cartan(n, g);
    for (int m = 1; m <= n; ++m) {
      const double D = toda::product_D(cd, m), bD = falling_factorial_det(columns(cd, m, false));
      EXPECT_NEAR(D, bD, 1e-10 * std::abs(bD)) << "n=" << n << " m=" << m;
      const double D1 = toda::product_D1(cd, m), bD1 = falling_factorial_det(columns(cd, m, true));
      EXPECT_NEAR(D1, bD1, 1e-10 * std::abs(bD1)) << "n=" << n << " m=" << m;
    }
  }
}

TEST(ProductD, Examples) {
  const std::vector<double> g2{1.0, 0.0};
  const auto cd2 = toda::build_cartan(2, g2);
  EXPECT_DOUBLE_EQ(toda::product_D(cd2, 1), 1.0);
  // prod_{i<j}(s_j - s_i) = s_2 - s_1 = 1 (the determinant fixes the sign)
  EXPECT_NEAR(toda::product_D(cd2, 2), 1.0, 1e-14);
  // m = n uses s_0 = -gamma^1 = -2/3: (s_2 - s_0) (s_2 - s_1)... first column replaced
  EXPECT_NEAR(toda::product_D1(cd2, 2), falling_factorial_det({-2.0 / 3.0, 7.0 / 3.0}), 1e-14);

  const std::vector<double> g3{0.0, 0.0, 0.0};
  const auto cd3 = toda::build_cartan(3, g3);
  EXPECT_NEAR(toda::product_D1(cd3, 2), 2.0, 1e-14);
  EXPECT_NEAR(toda::product_D1(cd3, 3), 6.0, 1e-14);
  EXPECT_THROW(toda::product_D(cd3, 0), toda::RangeError);
  EXPECT_THROW(toda::product_D1(cd3, 4), toda::RangeError);
}

TEST(GrowthExponent, Values) {
  const std::vector<double> g{1.0, 0.0};
  const auto cd = toda::build_cartan(2, g);
  EXPECT_NEAR(toda::growth_exponent(cd, 1), 7.0 / 3.0, 1e-15);
  EXPECT_NEAR(toda::growth_exponent(cd, 2), 4.0 / 3.0 + 7.0 / 3.0 - 1.0, 1e-15);
}

TEST(PredictExpansion, N2Example) {
  const auto sol = make({1.0, 0.0}, [](auto& p) { p.set_c(2, 1, {0.2, 0.1}); p.set_c(1, 0, {0.3, 0.0}); });
  const auto r1 = toda::predict_expansion(sol, 1);
  EXPECT_NEAR(r1.S_m, 7.0 / 3.0, 1e-15);
  EXPECT_NEAR(r1.leading, sol.params().lambda[2], 1e-15);
  EXPECT_TRUE(r1.first_order_present);  // n+1-m = 2 is in I2
  EXPECT_NEAR(*r1.alpha, 0.2, 0.0);
  const auto r2 = toda::predict_expansion(sol, 2);
  EXPECT_FALSE(r2.first_order_present);  // 1 is in I1
  EXPECT_FALSE(r2.alpha.has_value());
  EXPECT_DOUBLE_EQ(r2.normalization, 4.0);
}

TEST(FitExpansion, Liouville) {
  const auto sol = make({0.0}, [](auto& p) { p.lambda = {0.5, 0.5}; });
  const auto r = toda::fit_expansion(sol, 1, toda::FitGrid::log_spaced(1e3, 1e4));
  EXPECT_NEAR(r.fitted_S, 1.0, 1e-6);
  EXPECT_NEAR(r.fitted_leading / 0.5, 1.0, 1e-4);
  EXPECT_LE(std::hypot(r.fitted_cos, r.fitted_sin), 1e-6);
}

TEST(FitExpansion, RotationalHasNoFirstOrder) {
  const auto sol = make({1.0, 0.0}, [](auto&) {});
  for (int m = 1; m <= 2; ++m) {
    const auto r = toda::fit_expansion(sol, m, toda::FitGrid::log_spaced(1e3, 1e4));
    EXPECT_LE(std::hypot(r.fitted_cos, r.fitted_sin), 1e-6);
  }
}

TEST(FitExpansion, RecoversAlphaBeta) {
  const auto base = make({1.0, 0.0, 0.0}, [](auto& p) {
    p.set_c(3, 2, {0.3, -0.2});
    p.set_c(2, 1, {0.1, 0.4});
  });
  const auto sol = base.with_precision(toda::Precision::Extended);
  const auto r = toda::fit_expansion(sol, 1, toda::FitGrid::log_spaced(1e3, 1e4));
  ASSERT_TRUE(r.fitted_alpha && r.fitted_beta);
  EXPECT_NEAR(*r.fitted_alpha, 0.3, 1e-3);
  EXPECT_NEAR(*r.fitted_beta, -0.2, 1e-3);
  EXPECT_NEAR(r.fitted_S, r.S_m, 1e-6);
  EXPECT_NEAR(r.fitted_leading / r.leading, 1.0, 1e-4);
  // block 1 has gamma_1 = 1: m = 3 carries no 1/r term
  const auto r3 = toda::fit_expansion(sol, 3, toda::FitGrid::log_spaced(1e3, 1e4));
  EXPECT_FALSE(r3.first_order_present);
  EXPECT_LE(std::hypot(r3.fitted_cos, r3.fitted_sin), 1e-6);
}

TEST(FitExpansion, RejectsNarrowGrid) {
  const auto sol = make({0.0}, [](auto&) {});
  EXPECT_THROW(toda::fit_expansion(sol, 1, toda::FitGrid::log_spaced(1e3, 5e3)), toda::ConfigurationError);
  auto g = toda::FitGrid::log_spaced(1e3, 1e4);
  g.angles = 3;
  EXPECT_THROW(toda::fit_expansion(sol, 1, g), toda::ConfigurationError);
}

TEST(FitExpansion, Json) {
  const auto sol = make({0.0, 0.0}, [](auto& p) { p.set_c(2, 1, {0.5, 0.0}); });
  nlohmann::json j = toda::fit_expansion(sol, 1, toda::FitGrid::log_spaced(1e3, 1e4));
  for (const char* k : {"m", "S_m", "D", "D1", "leading", "first_order_present", "fitted_S", "fitted_leading"})
    EXPECT_TRUE(j.contains(k)) << k;
}
