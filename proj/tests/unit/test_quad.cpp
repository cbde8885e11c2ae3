#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "oracles.hpp"
#include "toda/quad.hpp"

using C = std::complex<double>;
constexpr double kPi = std::numbers::pi;

TEST(TanhSinh, EndpointSingularities) {
  const auto r = toda::tanh_sinh([](double x) { return std::vector<double>{1.0 / std::sqrt(x), std::log(x)}; }, 0.0, 1.0);
  EXPECT_NEAR(r.value[0], 2.0, 1e-12);
  EXPECT_NEAR(r.value[1], -1.0, 1e-12);
  EXPECT_GT(r.evaluations, 0);
}

TEST(TanhSinh, SmoothAndErrors) {
  const auto r = toda::tanh_sinh([](double x) { return std::vector<double>{std::cos(x)}; }, 0.0, 2.0);
  EXPECT_NEAR(r.value[0], std::sin(2.0), 1e-14);
  EXPECT_LE(r.error[0], 1e-10);
  EXPECT_THROW(toda::tanh_sinh([](double) { return std::vector<double>{1.0}; }, 1.0, 1.0), toda::ConfigurationError);
}

TEST(PeriodicMean, Trapezoid) {
  EXPECT_NEAR(toda::periodic_mean([](double t) { return std::cos(t) * std::cos(t); }, 16), 0.5, 1e-15);
  EXPECT_NEAR(toda::periodic_mean([](double t) { return std::exp(std::cos(t)); }, 32), std::cyl_bessel_i(0.0, 1.0), 1e-14);
}

TEST(DiskIntegral, Gaussian) {
  const double R = 3.0;
  const auto r = toda::disk_integral([](C z) { return std::vector<double>{std::exp(-std::norm(z))}; }, R);
  EXPECT_NEAR(r.value[0], kPi * (1.0 - std::exp(-R * R)), 1e-12);
}

TEST(DiskIntegral, OffCenterPeak) {
  // sharp Cauchy bump at 2 + 0.5i: integral over the plane is pi / eps^2 * eps^2 ... = pi
  const C c(2.0, 0.5);
  const double eps = 0.02;
  auto f = [&](C z) {
    const double d = std::norm(z - c) / (eps * eps);
    return std::vector<double>{1.0 / (eps * eps * (1 + d) * (1 + d))};
  };
  const auto r = toda::disk_integral(f, 1e3);
  const double tail = kPi * eps * eps / (1e6);  // approximate mass outside |z| < 1e3
  EXPECT_NEAR(r.value[0] + tail, kPi, 1e-6);
}

TEST(FluxIdentity, RowSums) {
  const std::vector<double> g3{0.0, 0.0, 0.0};
  const auto cd = toda::build_cartan(3, g3);
  const auto m = toda::flux_identity(cd);
  for (int j = 1; j <= 3; ++j) {
    double row = 0.0;
    for (int i = 1; i <= 3; ++i) row += cd.ainv(j, i);
    EXPECT_NEAR(m[j - 1], 8 * kPi * row, 1e-13);
  }
  const std::vector<double> g2{1.0, 0.0};
  const auto m2 = toda::flux_identity(toda::build_cartan(2, g2));
  EXPECT_NEAR(m2[0], 12 * kPi, 1e-13);
  EXPECT_NEAR(m2[1], 12 * kPi, 1e-13);
  const std::vector<double> g1{0.0};
  EXPECT_NEAR(toda::flux_identity(toda::build_cartan(1, g1))[0], 4 * kPi, 1e-14);
}

TEST(Mass, LiouvilleAgainstRadialIntegral) {
  const std::vector<double> g{0.0};
  auto cd = toda::build_cartan(1, g);
  toda::SolutionParams p(1);
  p.lambda = {0.2, 1.25};
  p.set_c(1, 0, {0.4, -0.3});
  const toda::TodaSolution sol(cd, toda::validate_params(cd, p, false).params);
  // e^{U_1} = (l0 + l1 |z + c|^2)^{-2}; over the plane: 2 pi int_0^inf r (l0 + l1 r^2)^{-2} dr = pi/(l0 l1)
  const auto m = toda::mass(sol, 1, 1e3);
  EXPECT_NEAR(m.value / testsupport::liouville_mass_1d(0.2, 1.25), 1.0, 1e-8);
  EXPECT_NEAR(testsupport::liouville_mass_1d(0.2, 1.25), kPi / (0.2 * 1.25), 1e-12);
  EXPECT_NEAR(m.value / m.predicted, 1.0, 1e-8);
  EXPECT_GE(m.error, 0.0);
  EXPECT_EQ(m.attempts, 1);
  EXPECT_THROW(toda::mass(sol, 1, 5.0), toda::ConfigurationError);
  EXPECT_THROW(toda::mass(sol, 2, 1e3), toda::RangeError);
}

TEST(Mass, NonIntegerGamma) {
  const std::vector<double> g{0.5, 0.0};
  auto cd = toda::build_cartan(2, g);
  toda::SolutionParams p(2);
  p.lambda.assign(3, std::cbrt(cd.lambda_product()));
  p.set_c(2, 1, {0.3, 0.2});
  const toda::TodaSolution sol(cd, toda::validate_params(cd, p, true).params);
  for (const auto& m : toda::masses(sol, 1e3)) EXPECT_NEAR(m.value / m.predicted, 1.0, 1e-5) << m.component;
}

TEST(Mass, Json) {
  const std::vector<double> g{0.0};
  auto cd = toda::build_cartan(1, g);
  const toda::TodaSolution sol(cd, toda::validate_params(cd, toda::SolutionParams(1), true).params);
  nlohmann::json j = toda::mass(sol, 1, 100.0);
  for (const char* k : {"component", "value", "error", "tail", "predicted", "radius"}) EXPECT_TRUE(j.contains(k)) << k;
}
