#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "toda/cartan.hpp"
#include "toda/errors.hpp"

using toda::Rational;

TEST(Rational, ReducesAndKeepsDenominatorPositive) {
  const Rational r(6, -4);
  EXPECT_EQ(r.num, -3);
  EXPECT_EQ(r.den, 2);
  EXPECT_EQ(Rational(1, 3) + Rational(1, 6), Rational(1, 2));
  EXPECT_EQ(Rational(2, 3) * Rational(3, 4), Rational(1, 2));
}

TEST(Cartan, TridiagonalMatrix) {
  const std::vector<double> g(4, 0.0);
  const auto cd = toda::build_cartan(4, g);
  for (int i = 1; i <= 4; ++i)
    for (int j = 1; j <= 4; ++j) {
      const int want = i == j ? 2 : (std::abs(i - j) == 1 ? -1 : 0);
      EXPECT_EQ(cd.a(i, j), want) << i << "," << j;
    }
}

TEST(Cartan, InverseIsExact) {
  for (int n = 1; n <= 7; ++n) {
    const std::vector<double> g(n, 0.0);
    const auto cd = toda::build_cartan(n, g);
    for (int i = 1; i <= n; ++i)
      for (int k = 1; k <= n; ++k) {
        Rational acc(0);
        for (int j = 1; j <= n; ++j) acc = acc + Rational(cd.a(i, j)) * cd.ainv_exact(j, k);
        EXPECT_EQ(acc, Rational(i == k ? 1 : 0)) << "n=" << n;
        // min(i,k)(n+1-max(i,k))/(n+1)
        EXPECT_EQ(cd.ainv_exact(i, k), Rational(std::min(i, k) * (n + 1 - std::max(i, k)), n + 1));
      }
  }
}

TEST(Cartan, ExponentsForN2) {
  const std::vector<double> g{1.0, 0.0};
  const auto cd = toda::build_cartan(2, g);
  EXPECT_NEAR(cd.gamma_up(1), 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(cd.s(0), -2.0 / 3.0, 1e-15);
  EXPECT_NEAR(cd.s(1), 4.0 / 3.0, 1e-15);
  EXPECT_NEAR(cd.s(2), 7.0 / 3.0, 1e-15);
  EXPECT_EQ(cd.I1(), std::vector<int>{1});
  EXPECT_EQ(cd.I2(), std::vector<int>{2});
  EXPECT_DOUBLE_EQ(cd.mu(1), 2.0);
}

TEST(Cartan, LambdaProduct) {
  const std::vector<double> g1{0.0};
  EXPECT_NEAR(toda::build_cartan(1, g1).lambda_product(), 0.25, 1e-16);
  const std::vector<double> g2{1.0, 0.0};
  EXPECT_NEAR(toda::build_cartan(2, g2).lambda_product() * 2304.0, 1.0, 1e-13);
  // 2^{-n(n+1)} prod_{i<=j} (mu_i + ... + mu_j)^{-2}, written out for n = 3.
  const std::vector<double> g3{0.5, 0.0, 2.0};
  const double m1 = 1.5, m2 = 1.0, m3 = 3.0;
  const double sums = m1 * m2 * m3 * (m1 + m2) * (m2 + m3) * (m1 + m2 + m3);
  EXPECT_NEAR(toda::build_cartan(3, g3).lambda_product() * std::pow(2.0, 12) * sums * sums, 1.0, 1e-13);
}

TEST(Cartan, IntegralGap) {
  const std::vector<double> g{std::sqrt(2.0), 0.0};
  const auto cd = toda::build_cartan(2, g);
  EXPECT_FALSE(cd.integral_gap(1, 0));
  EXPECT_TRUE(cd.integral_gap(2, 1));
  EXPECT_FALSE(cd.integral_gap(2, 0));
}

TEST(Cartan, DecayExponents) {
  const std::vector<double> g{1.0, 0.0, 0.5};
  const auto cd = toda::build_cartan(3, g);
  EXPECT_DOUBLE_EQ(toda::decay_exponent(cd, 1), -4.0 - 1.0);
  EXPECT_DOUBLE_EQ(toda::decay_exponent(cd, 3), -4.0 - 2.0);
  EXPECT_DOUBLE_EQ(toda::regular_decay_exponent(cd, 1), -4.0 - 1.0 - 2.0);
}

TEST(Cartan, RejectsBadInput) {
  const std::vector<double> neg{-0.5};
  EXPECT_THROW(toda::build_cartan(1, neg), toda::ValidationError);
  const std::vector<double> two{0.0, 0.0};
  EXPECT_THROW(toda::build_cartan(1, two), toda::ValidationError);
  EXPECT_THROW(toda::build_cartan(0, {}), toda::ValidationError);
  const std::vector<double> nan{std::nan("")};
  EXPECT_THROW(toda::build_cartan(1, nan), toda::ValidationError);
  try {
    toda::build_cartan(1, neg);
  } catch (const toda::ValidationError& e) {
    EXPECT_EQ(e.field(), "gamma[1]");
  }
}

TEST(Cartan, IndexRange) {
  const std::vector<double> g{0.0, 0.0};
  const auto cd = toda::build_cartan(2, g);
  EXPECT_THROW(cd.a(0, 1), toda::RangeError);
  EXPECT_THROW(cd.gamma(3), toda::RangeError);
}
