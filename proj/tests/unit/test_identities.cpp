#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <memory>
#include <numbers>
#include <random>
#include <vector>

#include "random_params.hpp"
#include "toda/identities.hpp"

using C = std::complex<double>;
constexpr double kPi = std::numbers::pi;

namespace {

C random_in_disk(std::mt19937_64& rng, double R) {
  return std::polar(R * std::sqrt(testsupport::uniform(rng, 0.0, 1.0)), testsupport::uniform(rng, -kPi, kPi));
}

std::shared_ptr<const toda::TodaSolution> make(std::vector<double> g, auto&& fill) {
  const int n = static_cast<int>(g.size());
  auto cd = toda::build_cartan(n, g);
  toda::SolutionParams p(n);
  p.lambda.assign(n + 1, std::pow(cd.lambda_product(), 1.0 / (n + 1)));
  fill(p);
  return std::make_shared<const toda::TodaSolution>(cd, toda::validate_params(cd, p, true).params);
}

}  // namespace

TEST(Green, BoundaryAndSymmetry) {
  const toda::DiskGreen gd{2.0};
  std::mt19937_64 rng(1);
  for (int k = 0; k < 50; ++k) {
    const C y = random_in_disk(rng, 2.0), eta = random_in_disk(rng, 2.0);
    const C b = std::polar(2.0, testsupport::uniform(rng, -kPi, kPi));
    EXPECT_LE(std::abs(toda::green(gd, y, b)), 1e-12);
    EXPECT_LE(std::abs(toda::green(gd, y, eta) - toda::green(gd, eta, y)), 1e-12);
  }
}

TEST(Green, FreeSpaceLimitAndOrigin) {
  const toda::DiskGreen gd{1.0};
  // at y = 0: G = -(1/2 pi) log|eta| for R = 1
  EXPECT_NEAR(toda::green(gd, 0.0, C(0.3, 0.4)), -std::log(0.5) / (2 * kPi), 1e-15);
  EXPECT_THROW(toda::green(gd, C(0.1, 0.1), C(0.1, 0.1)), toda::DomainError);
}

TEST(PolynomialBump, LaplacianAgainstFiniteDifferences) {
  const toda::PolynomialBump b{1.5, 3, 2, true};
  const C z(0.4, -0.7);
  const double h = 1e-3;
  const double fd = (b.value(z + h) + b.value(z - h) + b.value(z + C(0, h)) + b.value(z - C(0, h)) - 4 * b.value(z)) / (h * h);
  EXPECT_NEAR(b.laplacian(z), fd, 1e-5 * (1 + std::abs(fd)));
  EXPECT_NEAR(b.value(std::polar(1.5, 0.3)), 0.0, 1e-14);
}

TEST(Green, DeltaReproduction) {
  const toda::DiskGreen gd{2.0};
  for (const auto& bump : {toda::PolynomialBump{2.0, 2, 0, false}, toda::PolynomialBump{2.0, 3, 1, false},
                           toda::PolynomialBump{2.0, 2, 2, true}})
    for (C y : {C(0.0), C(0.6, -0.3), C(-1.1, 0.9)}) {
      const auto d = toda::delta_reproduction(gd, y, bump);
      EXPECT_NEAR(d.integral, d.expected, 1e-6) << y;
      EXPECT_NEAR(d.expected, -bump.value(y), 0.0);
    }
}

TEST(RingOrthogonality, ModelIntegral) {
  const double d = 0.7, q = -1.3, a = 0.4, b = 2.0;
  auto model = [&](C z) {
    const double r = std::abs(z), t = std::arg(z);
    return std::vector<double>{(d * std::cos(t) + q * std::sin(t)) / r};
  };
  for (double r : {1.0, 10.0, 1e3}) {
    const double v = toda::ring_orthogonality(model, {{a, b}}, r);
    EXPECT_NEAR(v, 2 * kPi * (a * d + b * q), 1e-10 * 2 * kPi * std::abs(a * d + b * q)) << r;
  }
}

TEST(Orthogonality, CrossResponseAndConstant) {
  const auto sol = make({0.0, 0.0}, [](auto& p) {
    p.set_c(2, 1, {0.4, -0.1});
    p.set_c(1, 0, {0.3, 0.2});
  });
  // alpha_2 moves the 1/r mode of e^{-U^1}, i.e. phi^1
  const toda::KernelElement ke(sol, toda::ParamId::alpha(2), toda::DerivativeMode::Analytic);
  const auto diag = toda::orthogonality_integral(ke, {{1.0, 0.0}, {0.0, 0.0}}, 1e3);
  const auto cross = toda::orthogonality_integral(ke, {{0.0, 0.0}, {1.0, 0.0}}, 1e3);
  EXPECT_LE(std::abs(cross.integral), 1e-4 * std::abs(diag.integral));
  EXPECT_NEAR(diag.fitted_K / (2 * kPi), 1.0, 1e-2);
  EXPECT_NEAR(diag.predicted_2pi, 2 * diag.predicted_pi, 1e-15 * std::abs(diag.predicted_2pi));
}

TEST(Ibp, ZeroGradientAndTwoRoutes) {
  const auto sol = make({0.0}, [](auto& p) { p.set_c(1, 0, {0.25, -0.5}); });
  const toda::KernelElement ke(sol, toda::ParamId::alpha(1), toda::DerivativeMode::Analytic);
  const auto zero = toda::ibp_check(ke, {toda::PolyField{1.0, 0, 0, 0.5, 0, 0}}, 1e3);
  EXPECT_EQ(zero.lhs, 0.0);
  EXPECT_EQ(zero.rhs, 0.0);
  const auto r = toda::ibp_check(ke, {toda::PolyField{0, 1.0, 0.5}}, 1e3);
  EXPECT_LE(r.difference, std::max(1e-5, 1e-3 * std::abs(r.lhs)));
  EXPECT_GT(std::abs(r.lhs), 1.0);
}

TEST(Ibp, RadialBaseLambdaVariation) {
  const auto sol = make({1.0, 0.0}, [](auto&) {});
  const toda::KernelElement ke(sol, toda::ParamId::lambda(1), toda::DerivativeMode::Analytic);
  const auto r = toda::ibp_check(ke, {toda::PolyField{0, 1.0, 0}, toda::PolyField{0, 0, 1.0}}, 1e3);
  EXPECT_LE(std::abs(r.lhs), 1e-5);
  EXPECT_LE(std::abs(r.rhs), 1e-5);
  EXPECT_LE(r.difference, 1e-5);
}
