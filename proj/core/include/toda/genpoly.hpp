#pragma once

// Generalized polynomials  q(z) = sum_j c_j z^{s_j}  with complex coefficients
// and real, possibly non-integer, exponents.

#include <algorithm>
#include <cmath>
#include <complex>
#include <concepts>
#include <limits>
#include <numbers>
#include <span>
#include <vector>

#include "toda/cartan.hpp"
#include "toda/errors.hpp"
#include "toda/params.hpp"

namespace toda {

// Branch of log z used for non-integer powers. The cut is the ray at angle
// `cut_angle`; arguments are taken in (cut_angle - 2 pi, cut_angle].
// The default is the principal branch (cut on the negative real axis).
struct Branch {
  double cut_angle = std::numbers::pi;

  static Branch rotated(double angle) { return Branch{std::numbers::pi + angle}; }
};

namespace detail {

template <std::floating_point T>
bool is_integer_exponent(T s) {
  return std::abs(s - std::round(s)) <= T(1e-12) * std::max(T(1), std::abs(s));
}

template <std::floating_point T>
bool exponents_equal(T a, T b) {
  return std::abs(a - b) <= T(64) * std::numeric_limits<T>::epsilon() *
                                std::max({T(1), std::abs(a), std::abs(b)});
}

// Argument of z in (cut - 2 pi, cut]; sets on_cut when z sits on the cut ray.
template <std::floating_point T>
T branch_arg(std::complex<T> z, const Branch& b, bool& on_cut) {
  const T two_pi = T(2) * std::numbers::pi_v<T>;
  const T cut = static_cast<T>(b.cut_angle);
  T theta = std::arg(z);
  while (theta > cut) theta -= two_pi;
  while (theta <= cut - two_pi) theta += two_pi;
  on_cut = std::abs(theta - cut) <= T(8) * std::numeric_limits<T>::epsilon() *
                                         std::max(T(1), std::abs(cut));
  return theta;
}

}  // namespace detail

template <std::floating_point T>
class GenPoly {
 public:
  using complex_type = std::complex<T>;

  struct Term {
    complex_type coeff;
    T exponent;
  };

  GenPoly() = default;

  // Sorts by exponent, merges equal exponents and drops zero coefficients.
  explicit GenPoly(std::vector<Term> terms) : terms_(std::move(terms)) { normalize(); }

  static GenPoly monomial(complex_type c, T s) { return GenPoly({Term{c, s}}); }

  std::span<const Term> terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  // Largest exponent; only meaningful when !empty().
  T top_exponent() const { return terms_.back().exponent; }

  // True when every pair of exponents differs by an integer, so that
  // p(z) z^{-top} is single valued.
  bool integral_gaps() const {
    for (const auto& t : terms_)
      if (!detail::is_integer_exponent(t.exponent - top_exponent())) return false;
    return true;
  }

  GenPoly derivative(int order = 1) const {
    if (order < 0) throw RangeError("GenPoly::derivative: negative order");
    std::vector<Term> out = terms_;
    for (int k = 0; k < order; ++k) {
      for (auto& t : out) {
        t.coeff *= t.exponent;
        t.exponent -= T(1);
      }
    }
    return GenPoly(std::move(out));
  }

  // sum_j c_j exp(s_j Log z) with Log on the given branch.
  complex_type eval(complex_type z, const Branch& branch = {}) const {
    if (z == complex_type(0)) return eval_at_origin();
    return eval_relative(z, T(0), branch);
  }

  // sum_j c_j exp((s_j - reference) Log z). When all s_j - reference are
  // integers the result does not depend on the branch.
  complex_type eval_relative(complex_type z, T reference, const Branch& branch = {}) const {
    if (z == complex_type(0)) throw DomainError("GenPoly: evaluation at z = 0");
    bool on_cut = false;
    const T theta = detail::branch_arg(z, branch, on_cut);
    const complex_type log_z(std::log(std::abs(z)), theta);
    complex_type acc(0);
    for (const auto& t : terms_) {
      const T e = t.exponent - reference;
      if (on_cut && !detail::is_integer_exponent(e))
        throw CutError("GenPoly: z lies on the branch cut of a non-integer power");
      acc += t.coeff * std::exp(e * log_z);
    }
    return acc;
  }

  GenPoly operator+(const GenPoly& other) const {
    std::vector<Term> all = terms_;
    all.insert(all.end(), other.terms_.begin(), other.terms_.end());
    return GenPoly(std::move(all));
  }

  GenPoly operator*(complex_type c) const {
    std::vector<Term> out = terms_;
    for (auto& t : out) t.coeff *= c;
    return GenPoly(std::move(out));
  }

  template <std::floating_point U>
  GenPoly<U> cast() const {
    std::vector<typename GenPoly<U>::Term> out;
    out.reserve(terms_.size());
    for (const auto& t : terms_)
      out.push_back({std::complex<U>(static_cast<U>(t.coeff.real()), static_cast<U>(t.coeff.imag())),
                     static_cast<U>(t.exponent)});
    return GenPoly<U>(std::move(out));
  }

 private:
  complex_type eval_at_origin() const {
    complex_type acc(0);
    for (const auto& t : terms_) {
      if (t.exponent < T(0)) throw DomainError("GenPoly: negative power evaluated at z = 0");
      if (t.exponent == T(0)) acc += t.coeff;
    }
    return acc;
  }

  void normalize() {
    std::sort(terms_.begin(), terms_.end(),
              [](const Term& a, const Term& b) { return a.exponent < b.exponent; });
    std::vector<Term> merged;
    merged.reserve(terms_.size());
    for (const auto& t : terms_) {
      if (!merged.empty() && detail::exponents_equal(merged.back().exponent, t.exponent))
        merged.back().coeff += t.coeff;
      else
        merged.push_back(t);
    }
    std::erase_if(merged, [](const Term& t) { return t.coeff == complex_type(0); });
    terms_ = std::move(merged);
  }

  std::vector<Term> terms_;
};

// Wronskian det[ d^p/dz^p cols[k] ]_{0 <= p, k < m}, expanded exactly. Each
// column is multilinear in its terms and the Wronskian of monomials is
// W(z^{a_1},...,z^{a_m}) = prod_{k<l}(a_l - a_k) z^{sum a - m(m-1)/2}.
template <std::floating_point T>
GenPoly<T> wronskian(std::span<const GenPoly<T>> cols) {
  using Term = typename GenPoly<T>::Term;
  const std::size_t m = cols.size();
  if (m == 0) return GenPoly<T>::monomial(1, 0);
  for (const auto& c : cols)
    if (c.empty()) return GenPoly<T>();

  const T shift = T(m * (m - 1)) / T(2);
  std::vector<Term> out;
  std::vector<std::size_t> pick(m, 0);
  std::vector<T> ex(m);
  while (true) {
    std::complex<T> coeff(1);
    for (std::size_t k = 0; k < m; ++k) {
      const auto& t = cols[k].terms()[pick[k]];
      coeff *= t.coeff;
      ex[k] = t.exponent;
    }
    T vander(1);
    T sum(0);
    for (std::size_t k = 0; k < m; ++k) {
      sum += ex[k];
      for (std::size_t l = k + 1; l < m; ++l) vander *= ex[l] - ex[k];
    }
    if (vander != T(0)) out.push_back(Term{coeff * vander, sum - shift});

    std::size_t k = 0;
    while (k < m && ++pick[k] == cols[k].size()) pick[k++] = 0;
    if (k == m) break;
  }
  return GenPoly<T>(std::move(out));
}

// q_0 = z^{-gamma^1};  q_i = sum_{j<=i} c_ij z^{s_j} with c_ii = 1.
template <std::floating_point T = double>
GenPoly<T> build_q(const CartanData& cd, const SolutionParams& params, int i) {
  if (i < 0 || i > cd.n()) throw RangeError("build_q: index outside 0..n");
  if (params.n() != cd.n()) throw ValidationError("n", "parameter rank mismatch");
  using Term = typename GenPoly<T>::Term;
  std::vector<Term> terms;
  for (int j = 0; j <= i; ++j) {
    const std::complex<double> c = params.c(i, j);
    terms.push_back(Term{std::complex<T>(static_cast<T>(c.real()), static_cast<T>(c.imag())),
                         static_cast<T>(cd.s_extended(j))});
  }
  return GenPoly<T>(std::move(terms));
}

}  // namespace toda
