#pragma once

// Exponent and matrix bookkeeping for the SU(n+1) Toda system.
//
// Index conventions: component indices i, j run over 1..n, the polynomial
// index runs over 0..n (s(0) is the exponent of q_0), matching the usual
// mathematical notation. Storage is 0-based internally.

#include <cstdint>
#include <span>
#include <vector>

namespace toda {

// Exact rational with int64 numerator and positive denominator, always reduced.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  Rational() = default;
  Rational(std::int64_t n, std::int64_t d = 1);

  double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }
  long double to_long_double() const {
    return static_cast<long double>(num) / static_cast<long double>(den);
  }

  friend Rational operator+(Rational a, Rational b);
  friend Rational operator*(Rational a, Rational b);
  friend bool operator==(Rational a, Rational b) { return a.num == b.num && a.den == b.den; }
};

class CartanData {
 public:
  int n() const { return n_; }

  // Cartan matrix entry a_ij, 1 <= i, j <= n.
  int a(int i, int j) const;
  // Exact inverse entry a^{ij}.
  Rational ainv_exact(int i, int j) const;
  double ainv(int i, int j) const { return ainv_exact(i, j).to_double(); }

  double gamma(int i) const;
  double mu(int i) const { return 1.0 + gamma(i); }
  double gamma_up(int i) const;
  // s(i) = mu_1 + ... + mu_i - gamma^1 for 0 <= i <= n; s(0) = -gamma^1 is the exponent of q_0.
  double s(int i) const;
  long double s_extended(int i) const;

  std::span<const double> gammas() const { return gamma_; }
  const std::vector<int>& I1() const { return i1_; }
  const std::vector<int>& I2() const { return i2_; }
  bool in_I1(int i) const { return gamma(i) != 0.0; }
  bool in_I2(int i) const { return gamma(i) == 0.0; }

  // True when s_i - s_j is an integer, i.e. z^{s_i - s_j} is single valued.
  bool integral_gap(int i, int j) const;

  // lambda_0 ... lambda_n required by the normalization of the solution family.
  double lambda_product() const { return lambda_product_; }

 private:
  friend CartanData build_cartan(int n, std::span<const double> gamma);

  int n_ = 0;
  std::vector<double> gamma_;
  std::vector<double> gamma_up_;
  std::vector<long double> s_;  // s_0 .. s_n
  std::vector<int> i1_, i2_;
  double lambda_product_ = 0.0;
};

// Builds the bookkeeping for rank n and singular strengths gamma (gamma_i >= 0).
// Throws ValidationError for n < 1, a size mismatch or a negative / non-finite entry.
CartanData build_cartan(int n, std::span<const double> gamma);

// log|y| slope of U_i at infinity: -4 - 2 gamma_{n+1-i}.
double decay_exponent(const CartanData& cd, int i);
// log|y| slope of the regular part: -4 - 2 gamma_{n+1-i} - 2 gamma_i.
double regular_decay_exponent(const CartanData& cd, int i);

}  // namespace toda
