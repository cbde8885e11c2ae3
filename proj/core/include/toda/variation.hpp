#pragma once

// Elements of the linearized kernel obtained by differentiating the solution
// family in one of its parameters:
//   phi^l = -dU^l/dp = d log det_l(f)/dp,   phi_i = sum_m a_im phi^m,
// which satisfy  Laplacian(phi^i) + e^{U_i} phi_i = 0  away from the origin.

#include <complex>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "toda/fd.hpp"
#include "toda/solution.hpp"

namespace toda {

struct ParamId {
  enum class Kind { Lambda, Alpha, Beta };
  Kind kind = Kind::Lambda;
  int index = 1;  // k of lambda_k (1..n), or i of c_{i,i-1} (1..n)

  static ParamId lambda(int k) { return {Kind::Lambda, k}; }
  static ParamId alpha(int i) { return {Kind::Alpha, i}; }
  static ParamId beta(int i) { return {Kind::Beta, i}; }
  // alpha / beta of the block that carries the 1/r term of e^{-U^m}: i = n+1-m.
  static ParamId alpha_for(int n, int m) { return alpha(n + 1 - m); }
  static ParamId beta_for(int n, int m) { return beta(n + 1 - m); }

  // "lambda[2]", "alpha[3]", "beta[1]"
  std::string name() const;
  // Parses the format produced by name().
  static ParamId parse(const std::string& s);
};

// Parameters moved a distance t along the curve of `id`. lambda_k moves to
// lambda_k + t with lambda_0 rescaled so the product stays fixed; alpha / beta
// shift the real / imaginary part of c_{i,i-1}. Throws ValidationError if the
// result is not admissible.
SolutionParams perturb(const CartanData& cd, const SolutionParams& p, ParamId id, double t);

// Tangent of that curve at t = 0.
ParamDirection direction_of(const CartanData& cd, const SolutionParams& p, ParamId id);

enum class DerivativeMode { FiniteDifference, Analytic };

class KernelElement {
 public:
  // FiniteDifference: central differences at steps `step` and `step`/2 combined by Richardson.
  // For lambda directions the step is relative to lambda_k.
  // Analytic: the exact directional derivative of the Cauchy-Binet sum.
  KernelElement(std::shared_ptr<const TodaSolution> base, ParamId param,
                DerivativeMode mode = DerivativeMode::FiniteDifference, double step = 1e-2);

  const TodaSolution& base() const { return *base_; }
  ParamId param() const { return param_; }
  DerivativeMode mode() const { return mode_; }
  double step() const { return step_; }
  int n() const { return base_->n(); }

  // phi^1..phi^n at z.
  std::vector<double> phi_up(std::complex<double> z) const;
  // phi_1..phi_n at z.
  std::vector<double> phi_low(std::complex<double> z) const;

  // Copy whose lower component phi_l is multiplied by `factor` while phi^ is
  // left alone (negative control; it breaks the linearized equation for any n,
  // whereas rescaling phi^1 alone for n = 1 would not).
  KernelElement scaled_component(int l, double factor) const;

 private:
  std::shared_ptr<const TodaSolution> base_;
  ParamId param_;
  DerivativeMode mode_;
  double step_;
  std::shared_ptr<const std::vector<TodaSolution>> shifted_;  // +d, -d, +d/2, -d/2
  std::shared_ptr<const DirectionTable> table_;
  std::vector<double> scale_low_;
};

KernelElement parameter_derivative(std::shared_ptr<const TodaSolution> sol, ParamId param,
                                   double step = 1e-2,
                                   DerivativeMode mode = DerivativeMode::FiniteDifference);

// |Laplacian(phi^i) + e^{U_i} phi_i| for each i.
std::vector<double> linearized_residuals(const KernelElement& ke, std::complex<double> z, double h,
                                         const StencilOptions& stencil = {});
// Max over i of the above.
double linearized_residual(const KernelElement& ke, std::complex<double> z, double h,
                           const StencilOptions& stencil = {});

struct DecayRow {
  double radius;
  int component;
  std::string mode;  // mean, cos, sin, rms
  double amplitude;
};

struct DecayFit {
  int component = 0;
  // phi^l ring modes fitted as A/r + B/r^2 + C/r^3 over all radii
  // (C is dropped when fewer than four radii are given).
  double cos_r1 = 0.0, cos_r2 = 0.0, cos_r3 = 0.0;
  double sin_r1 = 0.0, sin_r2 = 0.0, sin_r3 = 0.0;
  // -(log-log slope) of the ring rms of phi^l between the two largest radii;
  // +inf when the field vanishes identically.
  double rms_decay = 0.0;
  // -(log-log slope) of the ring rms of phi^l with its cos t and sin t modes removed.
  double rest_decay = 0.0;
};

struct DecayProfile {
  std::vector<DecayRow> rows;
  std::vector<DecayFit> fits;  // one per component
  // Asymptotic constants phi^l ~ (d_l cos t + q_l sin t)/r.
  std::vector<double> d, q;

  std::string to_csv() const;
};

// Ring Fourier analysis (trapezoid with `ring_points` nodes, offset from the cut).
DecayProfile decay_profile(const KernelElement& ke, std::span<const double> radii,
                           int ring_points = 64);

}  // namespace toda
