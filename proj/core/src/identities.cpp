#include "toda/identities.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "toda/errors.hpp"

namespace toda {

double green(const DiskGreen& gd, std::complex<double> y, std::complex<double> eta) {
  const double R = gd.R;
  if (!(R > 0.0)) throw ConfigurationError("green: radius must be positive");
  const double d2 = std::norm(y - eta);
  if (d2 == 0.0) throw DomainError("green: coincident points");
  const double dot = y.real() * eta.real() + y.imag() * eta.imag();
  const double num = R * R - 2.0 * dot + std::norm(y) * std::norm(eta) / (R * R);
  return std::log(num / d2) / (4.0 * std::numbers::pi);
}

double PolynomialBump::value(std::complex<double> eta) const {
  const double w = R * R - std::norm(eta);
  const auto p = std::pow(eta, degree);
  return std::pow(w, k) * (sine ? p.imag() : p.real());
}

double PolynomialBump::laplacian(std::complex<double> eta) const {
  const double rho2 = std::norm(eta);
  const double w = R * R - rho2;
  const auto p = std::pow(eta, degree);
  const double h = sine ? p.imag() : p.real();
  double lap_wk = -4.0 * k * std::pow(w, k - 1);
  if (k >= 2) lap_wk += 4.0 * k * (k - 1) * rho2 * std::pow(w, k - 2);
  return h * lap_wk - 4.0 * k * degree * std::pow(w, k - 1) * h;
}

DeltaCheck delta_reproduction(const DiskGreen& gd, std::complex<double> y, const PolynomialBump& phi,
                              int angles) {
  const double R = gd.R;
  if (std::abs(y) >= R) throw DomainError("delta_reproduction: y must lie inside the disk");
  if (angles < 8 || angles % 2 != 0) throw ConfigurationError("delta_reproduction: angles must be even and >= 8");
  double full = 0.0, half = 0.0, rad_err = 0.0;
  for (int j = 0; j < angles; ++j) {
    const double t = (j + 0.5) * 2.0 * std::numbers::pi / angles;
    const std::complex<double> e = std::polar(1.0, t);
    const double ye = y.real() * e.real() + y.imag() * e.imag();
    const double rho_max = -ye + std::sqrt(ye * ye + R * R - std::norm(y));
    const auto part = tanh_sinh(
        [&](double rho) {
          // |y - eta| = rho exactly; eta itself may round onto y for tiny rho.
          const auto eta = y + rho * e;
          const double dot = y.real() * eta.real() + y.imag() * eta.imag();
          const double num = R * R - 2.0 * dot + std::norm(y) * std::norm(eta) / (R * R);
          const double g = (std::log(num) - 2.0 * std::log(rho)) / (4.0 * std::numbers::pi);
          return std::vector<double>{rho * g * phi.laplacian(eta)};
        },
        0.0, rho_max);
    full += part.value[0];
    rad_err += part.error[0];
    if (j % 2 == 0) half += part.value[0];
  }
  const double dt = 2.0 * std::numbers::pi / angles;
  DeltaCheck out;
  out.integral = full * dt;
  out.expected = -phi.value(y);
  out.error_estimate = std::abs(out.integral - 2.0 * half * dt) + rad_err * dt;
  return out;
}

double PolyField::value(std::complex<double> y) const {
  const double x1 = y.real(), x2 = y.imag();
  return c0 + c1 * x1 + c2 * x2 + c11 * x1 * x1 + c12 * x1 * x2 + c22 * x2 * x2;
}

double ring_orthogonality(const std::function<std::vector<double>(std::complex<double>)>& phi_up,
                          const std::vector<Gradient>& grads, double r, int points,
                          double angle_offset) {
  if (!(r > 0.0)) throw ConfigurationError("ring_orthogonality: radius must be positive");
  const double dr = 1e-3 * r;
  double acc = 0.0;
  for (int j = 0; j < points; ++j) {
    const double t = angle_offset + (j + 0.5) * 2.0 * std::numbers::pi / points;
    const auto at = [&](double rr) { return phi_up(std::polar(rr, t)); };
    const auto p0 = at(r), p1 = at(r + dr), m1 = at(r - dr), p2 = at(r + 2 * dr), m2 = at(r - 2 * dr);
    if (grads.size() != p0.size()) throw ConfigurationError("ring_orthogonality: one gradient per component");
    for (std::size_t i = 0; i < p0.size(); ++i) {
      const double dphi = (8.0 * (p1[i] - m1[i]) - (p2[i] - m2[i])) / (12.0 * dr);
      acc += (grads[i].a * std::cos(t) + grads[i].b * std::sin(t)) * (p0[i] - r * dphi) * r;
    }
  }
  return acc * 2.0 * std::numbers::pi / points;
}

OrthogonalityResult orthogonality_integral(const KernelElement& ke, const std::vector<Gradient>& grads,
                                           double r, const DecayProfile& profile) {
  if (grads.size() != static_cast<std::size_t>(ke.n()))
    throw ConfigurationError("orthogonality_integral: one gradient per component");
  OrthogonalityResult out;
  out.radius = r;
  out.d = profile.d;
  out.q = profile.q;
  out.integral = ring_orthogonality([&ke](std::complex<double> z) { return ke.phi_up(z); }, grads, r,
                                    128, ke.base().branch().cut_angle);
  for (int i = 0; i < ke.n(); ++i) out.pairing += grads[i].a * out.d[i] + grads[i].b * out.q[i];
  out.predicted_2pi = 2.0 * std::numbers::pi * out.pairing;
  out.predicted_pi = std::numbers::pi * out.pairing;
  out.fitted_K = out.pairing != 0.0 ? out.integral / out.pairing : std::numeric_limits<double>::quiet_NaN();
  return out;
}

OrthogonalityResult orthogonality_integral(const KernelElement& ke, const std::vector<Gradient>& grads,
                                           double r) {
  const std::vector<double> radii{r, 2 * r, 4 * r, 8 * r};
  return orthogonality_integral(ke, grads, r, decay_profile(ke, radii));
}

IbpResult ibp_check(const KernelElement& ke, const std::vector<PolyField>& hbar, double R,
                    const DiskOptions& opt) {
  const int n = ke.n();
  if (hbar.size() != static_cast<std::size_t>(n)) throw ConfigurationError("ibp_check: one field per component");
  std::vector<Gradient> g;
  for (const auto& h : hbar) g.push_back(h.gradient_at_origin());

  IbpResult out;
  bool zero = true;
  for (const auto& gi : g) zero = zero && gi.a == 0.0 && gi.b == 0.0;
  if (zero) return out;

  DiskOptions o = opt;
  o.angle_offset = ke.base().branch().cut_angle;
  const auto q = disk_integral(
      [&](std::complex<double> z) {
        const auto e = ke.base().exp_lower(z);
        const auto phi = ke.phi_low(z);
        double acc = 0.0;
        for (int i = 0; i < n; ++i) acc += (g[i].a * z.real() + g[i].b * z.imag()) * e[i] * phi[i];
        return std::vector<double>{acc};
      },
      R, o);
  out.lhs = q.value[0];
  out.lhs_error = q.error[0];
  out.rhs = ring_orthogonality([&ke](std::complex<double> z) { return ke.phi_up(z); }, g, R, 128,
                               o.angle_offset);
  out.difference = std::abs(out.lhs - out.rhs);
  return out;
}

}  // namespace toda
