#include "toda/cartan.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "toda/errors.hpp"

namespace toda {

Rational::Rational(std::int64_t n, std::int64_t d) : num(n), den(d) {
  if (den == 0) throw RangeError("Rational: zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
}

Rational operator+(Rational a, Rational b) {
  return Rational(a.num * b.den + b.num * a.den, a.den * b.den);
}

Rational operator*(Rational a, Rational b) { return Rational(a.num * b.num, a.den * b.den); }

namespace {

void check_index(const CartanData& cd, int i, const char* what) {
  if (i < 1 || i > cd.n())
    throw RangeError(std::string(what) + " index " + std::to_string(i) + " outside 1.." +
                     std::to_string(cd.n()));
}

}  // namespace

int CartanData::a(int i, int j) const {
  check_index(*this, i, "Cartan");
  check_index(*this, j, "Cartan");
  if (i == j) return 2;
  return std::abs(i - j) == 1 ? -1 : 0;
}

Rational CartanData::ainv_exact(int i, int j) const {
  check_index(*this, i, "Cartan inverse");
  check_index(*this, j, "Cartan inverse");
  // Closed form of the inverse of the A_n Cartan matrix.
  const std::int64_t lo = std::min(i, j);
  const std::int64_t hi = std::max(i, j);
  return Rational(lo * (n_ + 1 - hi), n_ + 1);
}

double CartanData::gamma(int i) const {
  check_index(*this, i, "gamma");
  return gamma_[i - 1];
}

double CartanData::gamma_up(int i) const {
  check_index(*this, i, "gamma_up");
  return gamma_up_[i - 1];
}

double CartanData::s(int i) const { return static_cast<double>(s_extended(i)); }

long double CartanData::s_extended(int i) const {
  if (i < 0 || i > n_)
    throw RangeError("s index " + std::to_string(i) + " outside 0.." + std::to_string(n_));
  return s_[i];
}

bool CartanData::integral_gap(int i, int j) const {
  if (i < j) std::swap(i, j);
  if (j < 0 || i > n_) throw RangeError("integral_gap: index outside 0..n");
  double frac = 0.0;
  for (int k = j + 1; k <= i; ++k) frac += gamma_[k - 1];
  return std::abs(frac - std::round(frac)) <= 1e-12 * std::max(1.0, std::abs(frac));
}

CartanData build_cartan(int n, std::span<const double> gamma) {
  if (n < 1) throw ValidationError("n", "rank must be at least 1");
  if (gamma.size() != static_cast<std::size_t>(n))
    throw ValidationError("gamma", "expected " + std::to_string(n) + " entries, got " +
                                       std::to_string(gamma.size()));
  for (int i = 0; i < n; ++i) {
    if (!std::isfinite(gamma[i]))
      throw ValidationError("gamma[" + std::to_string(i + 1) + "]", "must be finite");
    if (gamma[i] < 0.0)
      throw ValidationError("gamma[" + std::to_string(i + 1) + "]", "must be nonnegative");
  }

  CartanData cd;
  cd.n_ = n;
  cd.gamma_.assign(gamma.begin(), gamma.end());

  cd.gamma_up_.resize(n);
  for (int i = 1; i <= n; ++i) {
    long double acc = 0.0L;
    for (int j = 1; j <= n; ++j) acc += cd.ainv_exact(i, j).to_long_double() * gamma[j - 1];
    cd.gamma_up_[i - 1] = static_cast<double>(acc);
  }

  long double g1 = 0.0L;
  for (int j = 1; j <= n; ++j) g1 += cd.ainv_exact(1, j).to_long_double() * gamma[j - 1];
  cd.s_.resize(n + 1);
  cd.s_[0] = -g1;
  for (int i = 1; i <= n; ++i) cd.s_[i] = cd.s_[i - 1] + 1.0L + gamma[i - 1];

  for (int i = 1; i <= n; ++i) (gamma[i - 1] != 0.0 ? cd.i1_ : cd.i2_).push_back(i);

  long double log_prod = -static_cast<long double>(n) * (n + 1) * std::log(2.0L);
  for (int i = 1; i <= n; ++i) {
    long double partial = 0.0L;
    for (int j = i; j <= n; ++j) {
      partial += 1.0L + gamma[j - 1];
      log_prod -= 2.0L * std::log(partial);
    }
  }
  cd.lambda_product_ = static_cast<double>(std::exp(log_prod));
  return cd;
}

double decay_exponent(const CartanData& cd, int i) {
  if (i < 1 || i > cd.n()) throw RangeError("decay_exponent: index outside 1..n");
  return -4.0 - 2.0 * cd.gamma(cd.n() + 1 - i);
}

double regular_decay_exponent(const CartanData& cd, int i) {
  return decay_exponent(cd, i) - 2.0 * cd.gamma(i);
}

}  // namespace toda
