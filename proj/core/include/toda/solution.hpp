#pragma once

// Global solutions of the singular SU(n+1) Toda system built from
//   f = sum_i lambda_i |q_i|^2,   e^{-U^m} = 2^{m(m-1)} det_m(f),
// where det_m(f) is the determinant of the mixed derivatives
// f^{(p,q)} = d_z^p d_zbar^q f, 0 <= p, q < m.
//
// det_m(f) is evaluated through the Cauchy-Binet expansion
//   det_m(f) = sum_{|S| = m} lambda_S |W_S(z)|^2
// with W_S the Wronskian of {q_i : i in S}, expanded exactly into a
// generalized polynomial. Every term is nonnegative, so the sum has no
// cancellation at any |z|, and it is accumulated in log space.

#include <complex>
#include <memory>
#include <tuple>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "toda/cartan.hpp"
#include "toda/fd.hpp"
#include "toda/genpoly.hpp"
#include "toda/params.hpp"

namespace toda {

enum class Precision { Double, Extended };

const char* to_string(Precision p);

struct Potentials {
  std::vector<double> upper;    // U^1..U^n
  std::vector<double> lower;    // U_1..U_n,  U_i = sum_m a_im U^m
  std::vector<double> regular;  // U_i - 2 gamma_i log|z|
};

// Infinitesimal change of the parameters: d lambda_0..d lambda_n and d c_ij.
struct ParamDirection {
  std::vector<double> dlambda;
  std::vector<std::tuple<int, int, std::complex<double>>> dc;
};

namespace detail {

template <std::floating_point T>
struct Minor {
  std::vector<int> subset;
  T log_lambda;
  GenPoly<T> w;
};

template <std::floating_point T>
struct Kernel {
  using real_type = T;
  std::vector<GenPoly<T>> q;
  std::vector<std::vector<Minor<T>>> minors;  // minors[m - 1]
};

template <std::floating_point T>
struct DirectionKernel {
  // Per minor: d log lambda_S and dW_S, aligned with Kernel::minors.
  std::vector<std::vector<std::pair<T, GenPoly<T>>>> terms;
};

}  // namespace detail

// Precomputed derivative data for one ParamDirection.
class DirectionTable {
 public:
  std::variant<detail::DirectionKernel<double>, detail::DirectionKernel<long double>> kernel;
};

class TodaSolution {
 public:
  // Throws ValidationError when the parameters fail the structural checks.
  TodaSolution(CartanData cd, SolutionParams params, Precision precision = Precision::Double,
               Branch branch = {});

  const CartanData& cartan() const { return cd_; }
  const SolutionParams& params() const { return params_; }
  Precision precision() const { return precision_; }
  const Branch& branch() const { return branch_; }
  int n() const { return cd_.n(); }

  TodaSolution with_params(SolutionParams params) const;
  TodaSolution with_branch(Branch branch) const;
  TodaSolution with_precision(Precision precision) const;

  const GenPoly<double>& q(int i) const;
  // p-th z-derivative of q_i, 0 <= p <= n.
  const GenPoly<double>& q_derivative(int i, int p) const;

  // sum_i lambda_i q_i^{(p)}(z) conj(q_i^{(q)}(z)).
  std::complex<double> f_mixed(int p, int q, std::complex<double> z) const;
  double f(std::complex<double> z) const { return f_mixed(0, 0, z).real(); }

  // The m x m Hermitian matrix [f^{(p,q)}].
  Eigen::MatrixXcd mixed_matrix(int m, std::complex<double> z) const;

  // log det_m(f), Cauchy-Binet route.
  double log_det(int m, std::complex<double> z) const;
  // log e^{-U^m} = m(m-1) log 2 + log det_m(f).
  double log_exp_neg_Um(int m, std::complex<double> z) const;
  // e^{-U^m}; DomainError if the value overflows double.
  double exp_neg_Um(int m, std::complex<double> z) const;
  // det_m(f) by LU of the mixed matrix, with entries and elimination in long
  // double (the direct route cancels heavily; double leaves ~1e-9 imaginary noise for n >= 3).
  std::complex<double> direct_determinant(int m, std::complex<double> z) const;
  // 2^{m(m-1)} direct_determinant. Throws
  // InvalidSolutionError when the determinant is not real positive to
  // `realness_tol` relative.
  double exp_neg_Um_direct(int m, std::complex<double> z, double realness_tol = 1e-10) const;

  Potentials potentials(std::complex<double> z) const;
  // e^{U_i(z)} = |z|^{2 gamma_i} e^{regular_i(z)} for every i.
  std::vector<double> exp_lower(std::complex<double> z) const;

  // |Laplacian(regular_i) + sum_j a_ij |z|^{2 gamma_j} e^{regular_j}| for all i.
  std::vector<double> pde_residuals(std::complex<double> z, double h,
                                    const StencilOptions& stencil = {}) const;
  double pde_residual(int i, std::complex<double> z, double h,
                      const StencilOptions& stencil = {}) const;

  DirectionTable direction_table(const ParamDirection& dir) const;
  // d/dt log det_m(f) along the direction.
  double log_det_directional(int m, std::complex<double> z, const DirectionTable& table) const;

 private:
  void build();

  CartanData cd_;
  SolutionParams params_;
  Precision precision_;
  Branch branch_;
  std::vector<std::vector<GenPoly<double>>> q_table_;  // q_table_[i][p]
  std::vector<std::vector<GenPoly<long double>>> q_table_ld_;
  std::shared_ptr<const std::variant<detail::Kernel<double>, detail::Kernel<long double>>> kernel_;
};

}  // namespace toda
