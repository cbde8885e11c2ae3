#pragma once

// Integral identities around the linearized system: the Dirichlet Green's
// function of a disk, the boundary "orthogonality" integral
//   sum_i int_0^{2pi} (a_i cos t + b_i sin t)(phi^i - r d_r phi^i) r dt
// and the integration-by-parts identity that equates it with
//   sum_i int_{|y|<R} (a_i y_1 + b_i y_2) e^{U_i} phi_i.

#include <complex>
#include <functional>
#include <vector>

#include "toda/quad.hpp"
#include "toda/variation.hpp"

namespace toda {

// G(y, eta) for -Laplacian on |y| < R with zero boundary values:
//   G = (1/4pi) log( (R^2 - 2 y.eta + |y|^2 |eta|^2 / R^2) / |y - eta|^2 ),
// the images formula written so that it is continuous at y = 0.
struct DiskGreen {
  double R = 1.0;
};

double green(const DiskGreen& gd, std::complex<double> y, std::complex<double> eta);

// phi = (R^2 - |eta|^2)^k * Re or Im of (eta_1 + i eta_2)^degree, zero on the boundary.
struct PolynomialBump {
  double R = 1.0;
  int k = 2;
  int degree = 0;
  bool sine = false;

  double value(std::complex<double> eta) const;
  double laplacian(std::complex<double> eta) const;
};

struct DeltaCheck {
  double integral = 0.0;  // int G(y, .) Laplacian(phi)
  double expected = 0.0;  // -phi(y)
  double error_estimate = 0.0;
};

// Polar quadrature centered at y (tanh-sinh in the radius, trapezoid in angle).
DeltaCheck delta_reproduction(const DiskGreen& gd, std::complex<double> y, const PolynomialBump& phi,
                              int angles = 128);

struct Gradient {
  double a = 0.0;
  double b = 0.0;
};

// Degree <= 2 polynomial c0 + c1 y1 + c2 y2 + c11 y1^2 + c12 y1 y2 + c22 y2^2.
struct PolyField {
  double c0 = 0, c1 = 0, c2 = 0, c11 = 0, c12 = 0, c22 = 0;

  double value(std::complex<double> y) const;
  Gradient gradient_at_origin() const { return {c1, c2}; }
};

// Ring integral for an arbitrary field phi^(z) (n components), 128-point trapezoid by default.
// r d_r phi is a five-point central difference in r with step 1e-3 r.
double ring_orthogonality(const std::function<std::vector<double>(std::complex<double>)>& phi_up,
                          const std::vector<Gradient>& grads, double r, int points = 128,
                          double angle_offset = 0.0);

struct OrthogonalityResult {
  double integral = 0.0;
  double pairing = 0.0;        // sum_i (a_i d_i + b_i q_i)
  double predicted_2pi = 0.0;  // 2 pi * pairing
  double predicted_pi = 0.0;   // pi * pairing
  double fitted_K = 0.0;       // integral / pairing (NaN when pairing = 0)
  double radius = 0.0;
  std::vector<double> d, q;
};

// d, q come from `profile` (see decay_profile).
OrthogonalityResult orthogonality_integral(const KernelElement& ke, const std::vector<Gradient>& grads,
                                           double r, const DecayProfile& profile);
// Same, with the profile taken over radii r, 2r, 4r, 8r.
OrthogonalityResult orthogonality_integral(const KernelElement& ke, const std::vector<Gradient>& grads,
                                           double r);

struct IbpResult {
  double lhs = 0.0;  // interior integral
  double rhs = 0.0;  // boundary integral at R
  double lhs_error = 0.0;
  double difference = 0.0;
};

IbpResult ibp_check(const KernelElement& ke, const std::vector<PolyField>& hbar, double R,
                    const DiskOptions& opt = {});

}  // namespace toda
