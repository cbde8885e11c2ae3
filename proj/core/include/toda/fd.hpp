#pragma once

// Finite-difference Laplacians on the plane (points are complex numbers).

#include <cmath>
#include <complex>
#include <vector>

#include "toda/errors.hpp"

namespace toda {

struct StencilOptions {
  int order = 4;          // 2: five-point stencil, 4: nine-point cross (x +- h, 2h; y +- h, 2h)
  bool richardson = true;  // combine steps h and 2h, raising the order by two
};

// Largest distance from z touched by the stencil.
inline double stencil_reach(double h, const StencilOptions& opt) {
  return h * (opt.order == 4 ? 2.0 : 1.0) * (opt.richardson ? 2.0 : 1.0);
}

namespace detail {

template <class F>
std::vector<double> laplacian_once(F& f, std::complex<double> z, double h, int order) {
  const std::complex<double> dx(h, 0.0), dy(0.0, h);
  const std::vector<double> c = f(z);
  std::vector<double> out(c.size(), 0.0);
  if (order == 2) {
    for (auto d : {dx, -dx, dy, -dy}) {
      const auto v = f(z + d);
      for (std::size_t i = 0; i < out.size(); ++i) out[i] += v[i];
    }
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = (out[i] - 4.0 * c[i]) / (h * h);
    return out;
  }
  for (auto d : {dx, -dx, dy, -dy}) {
    const auto near = f(z + d);
    const auto far = f(z + 2.0 * d);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += 16.0 * near[i] - far[i];
  }
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = (out[i] - 60.0 * c[i]) / (12.0 * h * h);
  return out;
}

}  // namespace detail

// Laplacian of every component of a vector-valued field f(z) at z.
template <class F>
std::vector<double> laplacian(F&& f, std::complex<double> z, double h,
                              const StencilOptions& opt = {}) {
  if (!(h > 0.0)) throw ConfigurationError("laplacian: step must be positive");
  if (opt.order != 2 && opt.order != 4) throw ConfigurationError("laplacian: order must be 2 or 4");
  if (stencil_reach(h, opt) >= std::abs(z))
    throw DomainError("laplacian: stencil reaches the origin");
  auto fine = detail::laplacian_once(f, z, h, opt.order);
  if (!opt.richardson) return fine;
  const auto coarse = detail::laplacian_once(f, z, 2.0 * h, opt.order);
  const double w = std::pow(2.0, opt.order);
  for (std::size_t i = 0; i < fine.size(); ++i) fine[i] = (w * fine[i] - coarse[i]) / (w - 1.0);
  return fine;
}

}  // namespace toda
