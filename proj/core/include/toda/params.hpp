#pragma once

#include <complex>
#include <string>
#include <vector>

#include "toda/cartan.hpp"

namespace toda {

// Parameters of one global solution: weights lambda_0..lambda_n and the
// lower-triangular coefficients c_ij (0 <= j < i <= n); c_ii = 1 is implicit.
class SolutionParams {
 public:
  SolutionParams() = default;
  // lambda = 1 everywhere, all c_ij = 0, not normalized.
  explicit SolutionParams(int n);

  int n() const { return n_; }

  std::vector<double> lambda;
  bool normalized = false;

  std::complex<double> c(int i, int j) const;
  void set_c(int i, int j, std::complex<double> value);

  // Sub-diagonal split c_{i,i-1} = alpha_i + sqrt(-1) beta_i.
  double alpha(int i) const { return c(i, i - 1).real(); }
  double beta(int i) const { return c(i, i - 1).imag(); }

  bool rotational() const;

 private:
  static std::size_t slot(int i, int j) { return static_cast<std::size_t>(i) * (i - 1) / 2 + j; }
  void check(int i, int j) const;

  int n_ = 0;
  std::vector<std::complex<double>> c_;
};

struct ValidatedParams {
  SolutionParams params;
  std::vector<std::string> coerced;  // entries rewritten by autonormalize
};

// c_ij may be nonzero only when s_i - s_j is an integer; otherwise |q_i|^2
// is not single valued. For j = i-1 this is the rule "gamma_i not in N implies c_{i,i-1} = 0".
bool coefficient_allowed(const CartanData& cd, int i, int j);

// Checks lambda > 0 and the forbidden coefficients. With autonormalize the
// product constraint is enforced by rescaling lambda_0 and forbidden c_ij are
// zeroed (and reported); without it a forbidden nonzero c_ij is an error and
// `normalized` records whether the supplied lambdas already satisfy the
// product constraint to 1e-12 relative.
ValidatedParams validate_params(const CartanData& cd, SolutionParams raw, bool autonormalize);

// Structural checks only (sizes, lambda > 0, forbidden c_ij == 0).
void check_structure(const CartanData& cd, const SolutionParams& p);

}  // namespace toda
