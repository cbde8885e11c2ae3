#include "toda/variation.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <regex>
#include <sstream>

#include <Eigen/Dense>

#include "toda/errors.hpp"

namespace toda {

std::string ParamId::name() const {
  const char* k = kind == Kind::Lambda ? "lambda" : kind == Kind::Alpha ? "alpha" : "beta";
  return std::string(k) + "[" + std::to_string(index) + "]";
}

ParamId ParamId::parse(const std::string& s) {
  static const std::regex re(R"((lambda|alpha|beta)\[(\d+)\])");
  std::smatch m;
  if (!std::regex_match(s, m, re)) throw ValidationError("param", "cannot parse '" + s + "'");
  const int idx = std::stoi(m[2].str());
  if (m[1] == "lambda") return lambda(idx);
  if (m[1] == "alpha") return alpha(idx);
  return beta(idx);
}

namespace {

void check_id(const CartanData& cd, ParamId id) {
  if (id.index < 1 || id.index > cd.n())
    throw ValidationError("param", id.name() + ": index outside 1..n");
  if (id.kind != ParamId::Kind::Lambda && !coefficient_allowed(cd, id.index, id.index - 1))
    throw ValidationError("param", id.name() + ": c[" + std::to_string(id.index) + "," +
                                       std::to_string(id.index - 1) + "] must vanish");
}

}  // namespace

SolutionParams perturb(const CartanData& cd, const SolutionParams& p, ParamId id, double t) {
  check_id(cd, id);
  SolutionParams out = p;
  const int i = id.index;
  switch (id.kind) {
    case ParamId::Kind::Lambda: {
      const double lk = p.lambda[i] + t;
      if (!(lk > 0.0)) throw ValidationError("lambda[" + std::to_string(i) + "]", "step leaves lambda > 0");
      out.lambda[0] = p.lambda[0] * p.lambda[i] / lk;
      out.lambda[i] = lk;
      break;
    }
    case ParamId::Kind::Alpha:
      out.set_c(i, i - 1, p.c(i, i - 1) + std::complex<double>(t, 0.0));
      break;
    case ParamId::Kind::Beta:
      out.set_c(i, i - 1, p.c(i, i - 1) + std::complex<double>(0.0, t));
      break;
  }
  return out;
}

ParamDirection direction_of(const CartanData& cd, const SolutionParams& p, ParamId id) {
  check_id(cd, id);
  ParamDirection d;
  const int i = id.index;
  if (id.kind == ParamId::Kind::Lambda) {
    d.dlambda.assign(cd.n() + 1, 0.0);
    d.dlambda[i] = 1.0;
    d.dlambda[0] = -p.lambda[0] / p.lambda[i];
  } else {
    d.dc.emplace_back(i, i - 1, id.kind == ParamId::Kind::Alpha ? std::complex<double>(1.0, 0.0)
                                                                : std::complex<double>(0.0, 1.0));
  }
  return d;
}

KernelElement::KernelElement(std::shared_ptr<const TodaSolution> base, ParamId param,
                             DerivativeMode mode, double step)
    : base_(std::move(base)), param_(param), mode_(mode), step_(step) {
  if (!base_) throw ConfigurationError("KernelElement: null base solution");
  const auto& cd = base_->cartan();
  check_id(cd, param_);
  scale_low_.assign(cd.n(), 1.0);
  if (mode_ == DerivativeMode::Analytic) {
    table_ = std::make_shared<const DirectionTable>(
        base_->direction_table(direction_of(cd, base_->params(), param_)));
    return;
  }
  // Below ~1e-6 the O(eps/step) rounding of a difference of log det values dominates.
  if (!(step_ >= 1e-6) || !std::isfinite(step_))
    throw RangeError("parameter step " + std::to_string(step_) + " below the precision floor 1e-6");
  // lambda steps are relative; an absolute step can exceed a small lambda_k.
  if (param_.kind == ParamId::Kind::Lambda) step_ *= base_->params().lambda[param_.index];
  std::vector<TodaSolution> shifted;
  for (double t : {step_, -step_, 0.5 * step_, -0.5 * step_})
    shifted.push_back(base_->with_params(perturb(cd, base_->params(), param_, t)));
  shifted_ = std::make_shared<const std::vector<TodaSolution>>(std::move(shifted));
}

std::vector<double> KernelElement::phi_up(std::complex<double> z) const {
  const int nn = n();
  std::vector<double> out(nn);
  for (int l = 1; l <= nn; ++l) {
    double v;
    if (mode_ == DerivativeMode::Analytic) {
      v = base_->log_det_directional(l, z, *table_);
    } else {
      const auto& s = *shifted_;
      const double coarse = (s[0].log_det(l, z) - s[1].log_det(l, z)) / (2.0 * step_);
      const double fine = (s[2].log_det(l, z) - s[3].log_det(l, z)) / step_;
      v = (4.0 * fine - coarse) / 3.0;
    }
    out[l - 1] = v;
  }
  return out;
}

std::vector<double> KernelElement::phi_low(std::complex<double> z) const {
  const auto up = phi_up(z);
  const auto& cd = base_->cartan();
  std::vector<double> out(n(), 0.0);
  for (int i = 1; i <= n(); ++i)
    for (int m = std::max(1, i - 1); m <= std::min(n(), i + 1); ++m)
      out[i - 1] += cd.a(i, m) * up[m - 1];
  for (int i = 0; i < n(); ++i) out[i] *= scale_low_[i];
  return out;
}

KernelElement KernelElement::scaled_component(int l, double factor) const {
  if (l < 1 || l > n()) throw RangeError("scaled_component: index outside 1..n");
  KernelElement out = *this;
  out.scale_low_[l - 1] *= factor;
  return out;
}

KernelElement parameter_derivative(std::shared_ptr<const TodaSolution> sol, ParamId param,
                                   double step, DerivativeMode mode) {
  return KernelElement(std::move(sol), param, mode, step);
}

std::vector<double> linearized_residuals(const KernelElement& ke, std::complex<double> z, double h,
                                         const StencilOptions& stencil) {
  const auto lap = laplacian([&ke](std::complex<double> w) { return ke.phi_up(w); }, z, h, stencil);
  const auto e = ke.base().exp_lower(z);
  const auto low = ke.phi_low(z);
  std::vector<double> out(ke.n());
  for (int i = 0; i < ke.n(); ++i) out[i] = std::abs(lap[i] + e[i] * low[i]);
  return out;
}

double linearized_residual(const KernelElement& ke, std::complex<double> z, double h,
                           const StencilOptions& stencil) {
  const auto r = linearized_residuals(ke, z, h, stencil);
  return *std::max_element(r.begin(), r.end());
}

namespace {

struct Ring {
  double mean = 0, cos = 0, sin = 0, rms = 0, rest = 0;
};

double decay_rate(double r1, double v1, double r2, double v2) {
  if (v1 <= 0.0 && v2 <= 0.0) return std::numeric_limits<double>::infinity();
  if (v1 <= 0.0 || v2 <= 0.0) return std::numeric_limits<double>::quiet_NaN();
  return -std::log(v2 / v1) / std::log(r2 / r1);
}

}  // namespace

DecayProfile decay_profile(const KernelElement& ke, std::span<const double> radii, int ring_points) {
  if (radii.size() < 2) throw ConfigurationError("decay_profile: need at least two radii");
  if (ring_points < 8) throw ConfigurationError("decay_profile: need at least 8 ring points");
  const int nn = ke.n();
  const double cut = ke.base().branch().cut_angle;
  std::vector<double> rs(radii.begin(), radii.end());
  std::sort(rs.begin(), rs.end());

  // rings[k][l]
  std::vector<std::vector<Ring>> rings(rs.size(), std::vector<Ring>(nn));
  for (std::size_t k = 0; k < rs.size(); ++k) {
    std::vector<std::vector<double>> samples(ring_points);
    std::vector<double> th(ring_points);
    for (int j = 0; j < ring_points; ++j) {
      th[j] = cut + (j + 0.5) * 2.0 * std::numbers::pi / ring_points;
      samples[j] = ke.phi_up(std::polar(rs[k], th[j]));
    }
    for (int l = 0; l < nn; ++l) {
      Ring& g = rings[k][l];
      for (int j = 0; j < ring_points; ++j) {
        const double v = samples[j][l];
        g.mean += v / ring_points;
        g.cos += 2.0 * v * std::cos(th[j]) / ring_points;
        g.sin += 2.0 * v * std::sin(th[j]) / ring_points;
        g.rms += v * v / ring_points;
      }
      for (int j = 0; j < ring_points; ++j) {
        const double v = samples[j][l] - g.cos * std::cos(th[j]) - g.sin * std::sin(th[j]);
        g.rest += v * v / ring_points;
      }
      g.rms = std::sqrt(g.rms);
      g.rest = std::sqrt(g.rest);
    }
  }

  DecayProfile out;
  for (std::size_t k = 0; k < rs.size(); ++k) {
    for (int l = 0; l < nn; ++l) {
      const Ring& g = rings[k][l];
      out.rows.push_back({rs[k], l + 1, "mean", g.mean});
      out.rows.push_back({rs[k], l + 1, "cos", g.cos});
      out.rows.push_back({rs[k], l + 1, "sin", g.sin});
      out.rows.push_back({rs[k], l + 1, "rms", g.rms});
    }
  }

  // A/r + B/r^2 (+ C/r^3) in the scaled variable x = r_min / r.
  const double r0 = rs.front();
  const int cols = rs.size() >= 4 ? 3 : 2;
  Eigen::MatrixXd M(rs.size(), cols);
  for (std::size_t k = 0; k < rs.size(); ++k) {
    const double x = r0 / rs[k];
    for (int c = 0; c < cols; ++c) M(k, c) = std::pow(x, c + 1);
  }
  const auto qr = M.colPivHouseholderQr();
  const std::size_t a = rs.size() - 2, b = rs.size() - 1;
  for (int l = 0; l < nn; ++l) {
    Eigen::VectorXd yc(rs.size()), ys(rs.size());
    for (std::size_t k = 0; k < rs.size(); ++k) {
      yc(k) = rings[k][l].cos;
      ys(k) = rings[k][l].sin;
    }
    const Eigen::VectorXd cc = qr.solve(yc), cs = qr.solve(ys);
    DecayFit f;
    f.component = l + 1;
    f.cos_r1 = cc(0) * r0;
    f.cos_r2 = cc(1) * r0 * r0;
    f.sin_r1 = cs(0) * r0;
    f.sin_r2 = cs(1) * r0 * r0;
    if (cols == 3) {
      f.cos_r3 = cc(2) * r0 * r0 * r0;
      f.sin_r3 = cs(2) * r0 * r0 * r0;
    }
    f.rms_decay = decay_rate(rs[a], rings[a][l].rms, rs[b], rings[b][l].rms);
    f.rest_decay = decay_rate(rs[a], rings[a][l].rest, rs[b], rings[b][l].rest);
    out.fits.push_back(f);
    out.d.push_back(f.cos_r1);
    out.q.push_back(f.sin_r1);
  }
  return out;
}

std::string DecayProfile::to_csv() const {
  std::ostringstream os;
  os.precision(17);
  os << "radius,component,mode,amplitude\n";
  for (const auto& r : rows) os << r.radius << ',' << r.component << ',' << r.mode << ',' << r.amplitude << '\n';
  return os.str();
}

}  // namespace toda
