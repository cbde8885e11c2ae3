#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "random_params.hpp"
#include "toda/solution.hpp"

using C = std::complex<double>;

namespace {

toda::TodaSolution liouville(double l0 = 0.5, double l1 = 0.5, C c = 0.0) {
  const std::vector<double> g{0.0};
  auto cd = toda::build_cartan(1, g);
  toda::SolutionParams p(1);
  p.lambda = {l0, l1};
  p.set_c(1, 0, c);
  return toda::TodaSolution(cd, p);
}

toda::TodaSolution random_solution(std::uint64_t seed, int n, std::vector<double> g = {}) {
  std::mt19937_64 rng(seed);
  if (g.empty()) g = testsupport::random_gamma(rng, n);
  auto cd = toda::build_cartan(n, g);
  auto p = testsupport::random_params(rng, cd);
  return toda::TodaSolution(cd, p);
}

C random_point(std::mt19937_64& rng, double rmin, double rmax) {
  const double r = std::exp(testsupport::uniform(rng, std::log(rmin), std::log(rmax)));
  return std::polar(r, testsupport::uniform(rng, -std::numbers::pi, std::numbers::pi));
}

// Sixth-order central differences of the real function f(x, y).
struct Derivs {
  double f, fx, fy, lap;
};
template <class F>
Derivs differentiate(F&& f, C z, double h) {
  static constexpr double d1[] = {-1.0 / 60, 3.0 / 20, -3.0 / 4, 0.0, 3.0 / 4, -3.0 / 20, 1.0 / 60};
  static constexpr double d2[] = {1.0 / 90, -3.0 / 20, 3.0 / 2, -49.0 / 18, 3.0 / 2, -3.0 / 20, 1.0 / 90};
  Derivs d{f(z), 0, 0, 0};
  for (int k = -3; k <= 3; ++k) {
    const double ax = f(z + C(k * h, 0)), ay = f(z + C(0, k * h));
    d.fx += d1[k + 3] * ax / h;
    d.fy += d1[k + 3] * ay / h;
    d.lap += d2[k + 3] * (ax + ay) / (h * h);
  }
  return d;
}

}  // namespace

TEST(Solution, MixedDerivativesBasic) {
  const auto sol = random_solution(1, 2, {1.0, 0.0});
  std::mt19937_64 rng(2);
  for (int k = 0; k < 20; ++k) {
    const C z = random_point(rng, 0.1, 10);
    const C f00 = sol.f_mixed(0, 0, z);
    EXPECT_GT(f00.real(), 0.0);
    EXPECT_LE(std::abs(f00.imag()), 1e-14 * f00.real());
    for (int p = 0; p <= 2; ++p)
      for (int q = 0; q <= 2; ++q)
        EXPECT_NEAR(std::abs(sol.f_mixed(p, q, z) - std::conj(sol.f_mixed(q, p, z))), 0.0,
                    1e-13 * std::abs(sol.f_mixed(p, q, z)) + 1e-300);
  }
  EXPECT_NEAR(std::abs(liouville().f_mixed(1, 1, C(0.3, 2.0)) - C(0.5)), 0.0, 1e-15);
}

TEST(Solution, LiouvilleClosedForms) {
  const auto sol = liouville();
  EXPECT_NEAR(sol.exp_neg_Um(1, 1.0), 1.0, 1e-15);
  const C z(0.7, -0.2);
  EXPECT_NEAR(sol.exp_neg_Um(1, z), sol.f(z), 1e-15);
  EXPECT_NEAR(sol.exp_neg_Um(1, z), (1.0 + std::norm(z)) / 2.0, 1e-15);
  const auto pot = sol.potentials(0.5);
  EXPECT_NEAR(pot.lower[0], -2.0 * std::log(0.625), 1e-14);
  EXPECT_NEAR(pot.upper[0], -std::log(0.625), 1e-14);
  EXPECT_NEAR(pot.regular[0], pot.lower[0], 0.0);
}

TEST(Solution, DeterminantAgainstNumericalDifferentiation) {
  const auto sol = random_solution(7, 2, {1.0, 0.0});
  std::mt19937_64 rng(8);
  for (int k = 0; k < 10; ++k) {
    const C z = random_point(rng, 0.3, 3.0);
    const auto d = differentiate([&](C w) { return sol.f(w); }, z, 1e-2 * std::abs(z));
    // f_z = (f_x - i f_y)/2, f_{z zbar} = lap/4
    const double det = d.f * d.lap / 4.0 - (d.fx * d.fx + d.fy * d.fy) / 4.0;
    EXPECT_NEAR(sol.exp_neg_Um(2, z) / (4.0 * det), 1.0, 1e-8) << z;
  }
}

TEST(Solution, CauchyBinetMatchesLu) {
  for (int n = 2; n <= 4; ++n) {
    const auto sol = random_solution(100 + n, n);
    std::mt19937_64 rng(n);
    for (int k = 0; k < 10; ++k) {
      const C z = random_point(rng, 0.2, 5.0);
      for (int m = 1; m <= n; ++m)
        EXPECT_NEAR(sol.exp_neg_Um_direct(m, z) / sol.exp_neg_Um(m, z), 1.0, 1e-8);
    }
  }
}

TEST(Solution, LeadingMinorsPositiveAndReal) {
  const auto sol = random_solution(31, 3);
  std::mt19937_64 rng(4);
  for (int k = 0; k < 20; ++k) {
    const C z = random_point(rng, 0.1, 10.0);
    for (int m = 1; m <= 3; ++m) {
      const C det = sol.direct_determinant(m, z);
      EXPECT_GT(det.real(), 0.0);
      EXPECT_LE(std::abs(det.imag()) / std::abs(det), 1e-10);
    }
  }
}

TEST(Solution, DirectRouteIllConditioned) {
  // integer gamma with every c_ij set: the 3x3 Gram matrix at |z| = 10 loses ~10 digits
  const std::vector<double> g{0.0, 2.0, 1.0};
  const auto cd = toda::build_cartan(3, g);
  toda::SolutionParams p(3);
  p.lambda = {0.0023, 0.0031, 0.0093, 0.0071};
  p.set_c(1, 0, {0.19, 0.49});
  p.set_c(2, 0, {0.20, 0.18});
  p.set_c(2, 1, {0.35, -0.02});
  p.set_c(3, 0, {-0.30, -0.32});
  p.set_c(3, 1, {0.21, 0.39});
  p.set_c(3, 2, {-0.47, 0.03});
  const toda::TodaSolution sol(cd, toda::validate_params(cd, p, true).params);
  for (double t : {0.3, 1.5, 2.8}) {
    const C z = std::polar(10.0, t);
    const C det = sol.direct_determinant(3, z);
    EXPECT_LE(std::abs(det.imag()) / std::abs(det), 1e-10);
    EXPECT_NEAR(std::ldexp(det.real(), 6) / sol.exp_neg_Um(3, z), 1.0, 1e-12);
  }
}

TEST(Solution, CutIndependence) {
  const auto sol = random_solution(9, 3, {0.5, 0.0, 1.0});
  const auto rot = sol.with_branch(toda::Branch::rotated(-std::numbers::pi / 2));
  std::mt19937_64 rng(10);
  for (int k = 0; k < 20; ++k) {
    const C z = random_point(rng, 0.1, 10.0);
    if (std::abs(z.imag()) < 1e-9 || std::abs(z.real()) < 1e-9) continue;
    for (int m = 1; m <= 3; ++m)
      EXPECT_NEAR(rot.exp_neg_Um(m, z) / sol.exp_neg_Um(m, z), 1.0, 1e-10);
  }
}

TEST(Solution, RotationalCaseIsRadial) {
  const std::vector<double> g{1.0, 0.0};
  const auto cd = toda::build_cartan(2, g);
  auto p = toda::validate_params(cd, toda::SolutionParams(2), true).params;
  const toda::TodaSolution sol(cd, p);
  ASSERT_TRUE(p.rotational());
  const auto a = sol.potentials(std::polar(2.0, 0.0)).lower;
  for (double t : {1.0, 2.5}) {
    const auto b = sol.potentials(std::polar(2.0, t)).lower;
    for (int i = 0; i < 2; ++i) EXPECT_NEAR(a[i], b[i], 1e-10);
  }
}

TEST(Solution, DecaySlope) {
  const auto sol = random_solution(12, 2, {1.0, 0.0});
  const double R = 1e4;
  for (double t : {0.3, 2.0}) {
    const auto a = sol.potentials(std::polar(R, t)).lower;
    const auto b = sol.potentials(std::polar(2 * R, t)).lower;
    for (int i = 1; i <= 2; ++i)
      EXPECT_NEAR((a[i - 1] - b[i - 1]) / std::log(0.5), toda::decay_exponent(sol.cartan(), i), 0.01);
  }
}

TEST(Solution, PdeResidual) {
  EXPECT_LE(liouville().pde_residual(1, C(1, 1), 1e-3), 1e-7);
  const auto sol = random_solution(13, 2, {1.0, 0.0});
  std::mt19937_64 rng(14);
  double worst = 0.0;
  for (int k = 0; k < 50; ++k) worst = std::max(worst, sol.pde_residual(1, random_point(rng, 0.1, 10), 1e-3));
  EXPECT_LE(worst, 1e-6);
}

TEST(Solution, ResidualDetectsBrokenNormalization) {
  const std::vector<double> g{1.0, 0.0};
  const auto cd = toda::build_cartan(2, g);
  auto p = toda::validate_params(cd, toda::SolutionParams(2), true).params;
  p.lambda[0] *= 2.0;
  const toda::TodaSolution sol(cd, p);
  std::mt19937_64 rng(15);
  double worst = 0.0;
  for (int k = 0; k < 20; ++k) {
    const auto r = sol.pde_residuals(random_point(rng, 0.1, 10), 1e-3);
    for (double v : r) worst = std::max(worst, v);
  }
  EXPECT_GE(worst, 1e-2);
}

TEST(Solution, StencilAtOriginIsDomainError) {
  EXPECT_THROW(liouville().pde_residual(1, C(1e-3, 0), 1e-3), toda::DomainError);
  EXPECT_THROW(liouville().f(0.0 * C(1, 0)), toda::DomainError);
}

TEST(Solution, ExtendedPrecisionAgrees) {
  const auto sol = random_solution(16, 3);
  const auto ext = sol.with_precision(toda::Precision::Extended);
  std::mt19937_64 rng(17);
  for (int k = 0; k < 10; ++k) {
    const C z = random_point(rng, 0.1, 1e4);
    for (int m = 1; m <= 3; ++m) EXPECT_NEAR(sol.log_det(m, z), ext.log_det(m, z), 1e-11 * (1 + std::abs(ext.log_det(m, z))));
  }
}

TEST(Solution, LargeRadiusStaysFinite) {
  const auto sol = random_solution(18, 4);
  const double v = sol.log_exp_neg_Um(4, C(1e6, 3e5));
  EXPECT_TRUE(std::isfinite(v));
}

TEST(ValidateParams, Normalization) {
  const std::vector<double> g{0.0};
  const auto cd = toda::build_cartan(1, g);
  toda::SolutionParams raw(1);
  raw.lambda = {3.0, 0.5};
  const auto v = toda::validate_params(cd, raw, true);
  EXPECT_TRUE(v.params.normalized);
  EXPECT_NEAR(v.params.lambda[0] * v.params.lambda[1], 0.25, 1e-16);
  EXPECT_FALSE(toda::validate_params(cd, raw, false).params.normalized);
  raw.lambda = {0.5, 0.5};
  EXPECT_TRUE(toda::validate_params(cd, raw, false).params.normalized);
}

TEST(ValidateParams, ForbiddenCoefficient) {
  const std::vector<double> g{std::sqrt(2.0), 0.0};
  const auto cd = toda::build_cartan(2, g);
  toda::SolutionParams raw(2);
  raw.set_c(1, 0, {0.1, 0.0});
  try {
    toda::validate_params(cd, raw, false);
    FAIL() << "expected ValidationError";
  } catch (const toda::ValidationError& e) {
    EXPECT_EQ(e.field(), "c[1,0]");
  }
  const auto v = toda::validate_params(cd, raw, true);
  EXPECT_EQ(v.params.c(1, 0), C(0.0));
  ASSERT_FALSE(v.coerced.empty());
  EXPECT_NE(v.coerced.front().find("c[1,0]"), std::string::npos);
}

TEST(ValidateParams, NonpositiveLambda) {
  const std::vector<double> g{0.0};
  const auto cd = toda::build_cartan(1, g);
  toda::SolutionParams raw(1);
  raw.lambda = {-1.0, 0.5};
  EXPECT_THROW(toda::validate_params(cd, raw, true), toda::ValidationError);
}
