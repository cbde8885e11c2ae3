#pragma once

// Quadrature on intervals, rings and disks, and total masses
//   m_i = integral over the plane of |y|^{2 gamma_i} e^{regular_i} = integral of e^{U_i}.

#include <complex>
#include <functional>
#include <vector>

#include <nlohmann/json.hpp>

#include "toda/solution.hpp"

namespace toda {

struct QuadResult {
  std::vector<double> value;
  // Per component: |value - value at the previous (half) resolution| plus
  // the angular estimate for disk integrals.
  std::vector<double> error;
  int evaluations = 0;
};

struct TanhSinhOptions {
  double rel_tol = 1e-13;
  double abs_tol = 0.0;
  int max_level = 9;  // step 2^-level
  double t_max = 4.0;  // endpoint nodes reach ~1e-37 of the interval
  // > 0: the trailing block of this many components holds integrals of |f_i|,
  // and component i converges relative to entry i mod magnitude_width of it.
  int magnitude_width = 0;
};

// Integral of a vector-valued f over [a, b]. Endpoint singularities of the
// form x^p (p > -1) are handled by the double-exponential change of variable.
QuadResult tanh_sinh(const std::function<std::vector<double>(double)>& f, double a, double b,
                     const TanhSinhOptions& opt = {});

// (1/points) sum f(offset + 2 pi j / points), j = 0..points-1: the mean of a
// periodic function over a period.
double periodic_mean(const std::function<double(double)>& f, int points, double offset = 0.0);

struct DiskOptions {
  int angles = 64;            // starting ring resolution
  int max_angles = 4096;      // rings are refined by doubling up to this
  double angular_tol = 1e-12; // change, relative to the ring mean of |f|, that stops the doubling
  double first_panel = 1e-2;  // radial panels [0, p], then geometric up to R
  int panels_per_decade = 4;
  double split_tol = 1e-10;   // bisect a panel whose error exceeds this times its integral of |f|
  int max_splits = 6;
  TanhSinhOptions radial{};
  double angle_offset = 0.0;  // nodes at angle_offset + (j + 1/2) 2 pi / angles, nested under doubling
};

// Integral over the disk |y| < R of a vector-valued f, in polar coordinates.
// The error adds the radial level difference and the change when half the
// angular nodes are used on the finest ring.
QuadResult disk_integral(const std::function<std::vector<double>(std::complex<double>)>& f,
                         double R, const DiskOptions& opt = {});

struct MassReport {
  int component = 0;
  double value = 0.0;       // quadrature + tail
  double quadrature = 0.0;  // integral over |y| < radius
  double error = 0.0;
  double tail = 0.0;
  double tail_error = 0.0;
  double predicted = 0.0;   // flux identity
  double radius = 0.0;      // radius actually used
  double local_slope = 0.0;
  double predicted_slope = 0.0;
  int attempts = 0;
};

// Masses of all components. The tail beyond R is c r^p integrated in closed
// form with p = decay_exponent(i) and c from the ring mean at R; if the local
// slope between R/2 and R differs from p by more than 5%, R is multiplied by
// 10 (at most 3 attempts, then ConfigurationError).
std::vector<MassReport> masses(const TodaSolution& sol, double R, const DiskOptions& opt = {});
MassReport mass(const TodaSolution& sol, int i, double R, const DiskOptions& opt = {});

// m_j = sum_i a^{ji} (4 pi gamma_i + 8 pi + 4 pi gamma_{n+1-i}), from
// integrating each equation over a large disk and using the decay slopes.
std::vector<double> flux_identity(const CartanData& cd);

void to_json(nlohmann::json& j, const MassReport& r);

}  // namespace toda
