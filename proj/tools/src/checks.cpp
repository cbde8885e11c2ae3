#include "todacli/checks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "toda/asymptotics.hpp"
#include "toda/errors.hpp"
#include "toda/identities.hpp"
#include "toda/quad.hpp"
#include "toda/variation.hpp"

namespace todacli {

using nlohmann::json;
using toda::ParamId;
using C = std::complex<double>;

std::mt19937_64 check_rng(std::uint64_t seed, const std::string& check) {
  std::uint64_t h = 1469598103934665603ULL;  // FNV-1a
  for (unsigned char ch : check) h = (h ^ ch) * 1099511628211ULL;
  return std::mt19937_64(seed ^ h);
}

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1p-53; }

C sample_point(std::mt19937_64& rng, double r_min, double r_max) {
  const double r = r_min * std::pow(r_max / r_min, uniform01(rng));
  return std::polar(r, 2.0 * std::numbers::pi * uniform01(rng));
}

namespace {

double max_of(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, x);
  return m;
}

double median(std::vector<double> v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(v.begin(), v.end());
  const std::size_t k = v.size() / 2;
  return v.size() % 2 ? v[k] : 0.5 * (v[k - 1] + v[k]);
}

// Kernel-element parameters: explicit list, or every lambda_k and every admissible alpha/beta.
std::vector<ParamId> kernel_params(const Context& ctx) {
  std::vector<ParamId> out;
  if (!ctx.cfg.linearize.params.empty()) {
    for (const auto& s : ctx.cfg.linearize.params) out.push_back(ParamId::parse(s));
    return out;
  }
  const int n = ctx.cd.n();
  for (int k = 1; k <= n; ++k) out.push_back(ParamId::lambda(k));
  for (int i = 1; i <= n; ++i) {
    if (!toda::coefficient_allowed(ctx.cd, i, i - 1)) continue;
    out.push_back(ParamId::alpha(i));
    out.push_back(ParamId::beta(i));
  }
  return out;
}

// Block i = n+1-m carries the 1/r mode of component m when i is in I_2.
bool carries_first_order(const toda::CartanData& cd, ParamId id) {
  return id.kind != ParamId::Kind::Lambda && cd.in_I2(id.index);
}

}  // namespace

CheckOutput check_construct(const Context& ctx) {
  const auto& cfg = ctx.cfg;
  const auto& sol = *ctx.sol;
  const int n = ctx.cd.n();
  CheckOutput out;
  Check& c = out.check;
  c.name = "construct";

  long double prod = 1.0L;
  for (double l : sol.params().lambda) prod *= l;
  c.add(Metric::rel("lambda_product", static_cast<double>(prod), ctx.cd.lambda_product(),
                    cfg.tol.lambda_product));

  auto rng = check_rng(cfg.seed, c.name);
  const auto rotated = sol.with_branch(toda::Branch::rotated(-0.5 * std::numbers::pi));
  double realness = 0.0, direct = 0.0, cut = 0.0, closed = 0.0;
  int nonpositive = 0;
  const bool liouville = n == 1 && ctx.cd.gamma(1) == 0.0;
  for (int k = 0; k < 20; ++k) {
    const C z = sample_point(rng, cfg.residual.r_min, cfg.residual.r_max);
    for (int m = 1; m <= n; ++m) {
      const double cb = sol.exp_neg_Um(m, z);
      const C det = sol.direct_determinant(m, z);
      if (!(cb > 0.0) || !(det.real() > 0.0)) ++nonpositive;
      realness = std::max(realness, std::abs(det.imag()) / std::abs(det));
      const double d = std::ldexp(det.real(), m * (m - 1));
      direct = std::max(direct, std::abs(d - cb) / cb);
      cut = std::max(cut, std::abs(std::expm1(rotated.log_det(m, z) - sol.log_det(m, z))));
    }
    if (liouville) {
      const auto& p = sol.params();
      const double exact = p.lambda[0] + p.lambda[1] * std::norm(z + p.c(1, 0));
      closed = std::max(closed, std::abs(sol.exp_neg_Um(1, z) - exact) / exact);
    }
  }
  c.add(Metric::upper("nonpositive_minors", nonpositive, 0.0));
  c.add(Metric::upper("realness", realness, cfg.tol.realness));
  c.add(Metric::upper("direct_vs_cauchy_binet", direct, cfg.tol.direct_route));
  c.add(Metric::upper("cut_independence", cut, cfg.tol.cut));
  if (liouville) c.add(Metric::upper("closed_form", closed, cfg.tol.closed_form));

  if (sol.params().rotational()) {
    double spread = 0.0;
    const auto base = sol.potentials(std::polar(2.0, 0.0)).lower;
    for (double t : {1.0, 2.5}) {
      const auto u = sol.potentials(std::polar(2.0, t)).lower;
      for (int i = 0; i < n; ++i) spread = std::max(spread, std::abs(u[i] - base[i]));
    }
    c.add(Metric::upper("radial_spread", spread, cfg.tol.radial_spread));
  }

  json s = json::array(), lam = sol.params().lambda;
  for (int i = 0; i <= n; ++i) s.push_back(ctx.cd.s(i));
  c.data = json{{"s", s}, {"lambda", lam}, {"lambda_product_target", ctx.cd.lambda_product()}};
  return out;
}

CheckOutput check_residual(const Context& ctx) {
  const auto& cfg = ctx.cfg;
  const auto& g = cfg.residual;
  const auto& sol = *ctx.sol;
  const int n = ctx.cd.n();
  CheckOutput out;
  Check& c = out.check;
  c.name = "residual";
  auto rng = check_rng(cfg.seed, c.name);

  std::ostringstream csv;
  csv.precision(17);
  csv << "x,y,component,residual\n";
  double worst = 0.0;
  for (int k = 0; k < g.points; ++k) {
    const C z = sample_point(rng, g.r_min, g.r_max);
    const auto r = sol.pde_residuals(z, g.h);
    for (int i = 0; i < n; ++i) csv << z.real() << ',' << z.imag() << ',' << i + 1 << ',' << r[i] << '\n';
    worst = std::max(worst, max_of(r));
  }
  c.add(Metric::upper("max_residual", worst, cfg.tol.residual));

  // Step-halving on the extrapolated stencil; pairs whose finer residual is
  // below 1e-10 are at the rounding floor and carry no order information.
  std::vector<double> orders;
  json order_rows = json::array();
  for (int k = 0; k < g.order_points; ++k) {
    const C z = sample_point(rng, std::max(g.r_min, 0.3), g.r_max);
    std::vector<double> res;
    for (double f : g.order_h) res.push_back(max_of(sol.pde_residuals(z, f * std::abs(z))));
    for (std::size_t j = 0; j + 1 < res.size(); ++j) {
      if (res[j + 1] < 1e-10) continue;
      orders.push_back(std::log(res[j] / res[j + 1]) / std::log(g.order_h[j] / g.order_h[j + 1]));
    }
    order_rows.push_back(json{{"z", {z.real(), z.imag()}}, {"residuals", res}});
  }
  c.add(Metric::lower("convergence_order", median(orders), cfg.tol.order_min));

  // log|y| slope of U_i between R and 2R, ring-averaged over 8 angles.
  const double R = g.decay_radius;
  json slopes = json::array();
  for (int i = 1; i <= n; ++i) {
    double a = 0.0, b = 0.0;
    for (int j = 0; j < 8; ++j) {
      const double t = sol.branch().cut_angle + (j + 0.5) * std::numbers::pi / 4.0;
      a += sol.potentials(std::polar(R, t)).lower[i - 1] / 8.0;
      b += sol.potentials(std::polar(2.0 * R, t)).lower[i - 1] / 8.0;
    }
    const double slope = (b - a) / std::log(2.0);
    slopes.push_back(slope);
    c.add(Metric::abs("decay_slope[" + std::to_string(i) + "]", slope, toda::decay_exponent(ctx.cd, i),
                      cfg.tol.decay_slope));
  }
  c.data = json{{"h", g.h}, {"order_samples", order_rows}, {"orders", orders}, {"decay_radius", R}};
  if (cfg.csv) out.files.push_back({"residual_points.csv", csv.str()});
  return out;
}

CheckOutput check_mass(const Context& ctx) {
  const auto& cfg = ctx.cfg;
  const auto& sol = *ctx.sol;
  const int n = ctx.cd.n();
  CheckOutput out;
  Check& c = out.check;
  c.name = "mass";
  toda::DiskOptions opt;
  opt.angles = cfg.mass.angles;
  const auto ms = toda::masses(sol, cfg.mass.radius, opt);
  json reports = json::array();
  for (const auto& m : ms) {
    const std::string tag = "[" + std::to_string(m.component) + "]";
    c.add(Metric::rel("mass" + tag, m.value, m.predicted, cfg.tol.mass));
    json j;
    toda::to_json(j, m);
    reports.push_back(j);
  }
  if (n == 1 && ctx.cd.gamma(1) == 0.0) {
    // 2 pi int_0^inf r (l0 + l1 r^2)^-2 dr = pi / (l0 l1)
    const auto& l = sol.params().lambda;
    c.add(Metric::rel("closed_form[1]", ms[0].value, std::numbers::pi / (l[0] * l[1]), cfg.tol.closed_form));
  }
  if (n == 2 && ctx.cd.gamma(2) == 0.0) {
    c.add(Metric::rel("example_4pi_2_plus_gamma1[1]", ms[0].value,
                      4.0 * std::numbers::pi * (2.0 + ctx.cd.gamma(1)), cfg.tol.mass));
  }
  if (cfg.mass.doubling_check) {
    const auto ms2 = toda::masses(sol, 2.0 * cfg.mass.radius, opt);
    for (int i = 0; i < n; ++i)
      c.add(Metric::upper("doubling_change[" + std::to_string(i + 1) + "]",
                          std::abs(ms2[i].value - ms[i].value), ms[i].error));
  }
  json flux = toda::flux_identity(ctx.cd);
  c.data = json{{"masses", reports}, {"flux_identity", flux}};
  return out;
}

CheckOutput check_expand(const Context& ctx) {
  const auto& cfg = ctx.cfg;
  const auto& g = cfg.expand;
  const auto& sol = *ctx.sol;
  const int n = ctx.cd.n();
  CheckOutput out;
  Check& c = out.check;
  c.name = "expand";
  const auto grid = toda::FitGrid::log_spaced(g.r_min, g.r_max, g.per_decade, g.angles);
  json reports = json::array();
  for (int m = 1; m <= n; ++m) {
    const auto r = toda::fit_expansion(sol, m, grid);
    const std::string tag = "[" + std::to_string(m) + "]";
    c.add(Metric::abs("S" + tag, r.fitted_S, r.S_m, cfg.tol.expand_S));
    c.add(Metric::rel("leading" + tag, r.fitted_leading, r.leading, cfg.tol.expand_leading));
    if (r.first_order_present) {
      c.add(Metric::abs("alpha" + tag, *r.fitted_alpha, *r.alpha, cfg.tol.expand_first));
      c.add(Metric::abs("beta" + tag, *r.fitted_beta, *r.beta, cfg.tol.expand_first));
    } else {
      // The fit is on log det, so the coefficient is already relative to the leading term.
      c.add(Metric::upper("first_order_absent" + tag, std::max(std::abs(r.fitted_cos), std::abs(r.fitted_sin)),
                          cfg.tol.expand_absent));
    }
    json j;
    toda::to_json(j, r);
    reports.push_back(j);
  }
  c.data = json{{"expansions", reports}};
  return out;
}

CheckOutput check_linearize(const Context& ctx) {
  const auto& cfg = ctx.cfg;
  const auto& g = cfg.linearize;
  const int n = ctx.cd.n();
  CheckOutput out;
  Check& c = out.check;
  c.name = "linearize";
  auto rng = check_rng(cfg.seed, c.name);
  std::vector<C> pts;
  for (int k = 0; k < g.points; ++k) pts.push_back(sample_point(rng, g.r_min, g.r_max));

  json elements = json::array();
  for (const auto id : kernel_params(ctx)) {
    const std::string tag = id.name();
    const toda::KernelElement fd(ctx.sol, id, toda::DerivativeMode::FiniteDifference, g.param_step);
    const toda::KernelElement an(ctx.sol, id, toda::DerivativeMode::Analytic);
    double good = 0.0, dual = 0.0;
    std::vector<double> bad(n, 0.0);
    for (const C z : pts) {
      good = std::max(good, toda::linearized_residual(fd, z, g.h));
      for (int l = 1; l <= n; ++l)
        bad[l - 1] = std::max(bad[l - 1], toda::linearized_residual(fd.scaled_component(l, g.corrupt_factor), z, g.h));
      const auto a = fd.phi_up(z), b = an.phi_up(z);
      for (int l = 0; l < n; ++l) dual = std::max(dual, std::abs(a[l] - b[l]));
    }
    c.add(Metric::upper(tag + ".residual", good, cfg.tol.linearize));
    c.add(Metric::upper(tag + ".dual_route", dual, cfg.tol.dual_route));
    const double worst_bad = *std::min_element(bad.begin(), bad.end());
    c.add(Metric::lower(tag + ".control_residual", worst_bad, cfg.tol.control_min));
    c.add(Metric::lower(tag + ".control_ratio", good > 0.0 ? worst_bad / good : std::numeric_limits<double>::infinity(),
                        cfg.tol.control_ratio));
    json el{{"param", tag}, {"residual", good}, {"control_residuals", bad}, {"dual_route", dual}};

    if (carries_first_order(ctx.cd, id)) {
      // The asymptotic profile uses the analytic route: at r ~ 1e3 the finite
      // difference has a ~1e-12 floor that hides the faster-decaying components.
      const int m = n + 1 - id.index;
      const bool is_alpha = id.kind == ParamId::Kind::Alpha;
      std::vector<double> radii = g.decay_radii;
      if (std::find(radii.begin(), radii.end(), g.amplitude_radius) == radii.end()) radii.push_back(g.amplitude_radius);
      const auto prof = toda::decay_profile(an, radii);
      const double factor = 2.0 * toda::product_D1(ctx.cd, m) / toda::product_D(ctx.cd, m);

      double ring = 0.0;
      for (const auto& row : prof.rows)
        if (row.radius == g.amplitude_radius && row.component == m && row.mode == (is_alpha ? "cos" : "sin"))
          ring = row.amplitude;
      c.add(Metric::rel(tag + ".amplitude_times_r", ring * g.amplitude_radius, factor, cfg.tol.decay_amplitude));

      const auto& fm = prof.fits[m - 1];
      const double main = is_alpha ? fm.cos_r1 : fm.sin_r1;
      const double other = is_alpha ? fm.sin_r1 : fm.cos_r1;
      c.add(Metric::upper(tag + ".mode_leak", std::abs(other / main), cfg.tol.mode_leak));
      double cross = 0.0, slowest = std::numeric_limits<double>::infinity();
      for (const auto& f : prof.fits) {
        if (f.component == m) continue;
        cross = std::max({cross, std::abs(f.cos_r1 / main), std::abs(f.sin_r1 / main)});
        slowest = std::min(slowest, f.rms_decay);
      }
      if (n > 1) {
        c.add(Metric::upper(tag + ".cross_component", cross, cfg.tol.cross_component));
        c.add(Metric::lower(tag + ".off_component_decay", slowest, cfg.tol.decay_exponent_min));
      }
      json fits = json::array();
      for (const auto& f : prof.fits)
        fits.push_back(json{{"component", f.component},
                            {"cos", {f.cos_r1, f.cos_r2, f.cos_r3}},
                            {"sin", {f.sin_r1, f.sin_r2, f.sin_r3}},
                            {"rms_decay", std::isfinite(f.rms_decay) ? json(f.rms_decay) : json(nullptr)}});
      el["m"] = m;
      el["first_order_factor"] = factor;
      el["fits"] = fits;
      el["d"] = prof.d;
      el["q"] = prof.q;
      if (cfg.csv) out.files.push_back({"decay_" + std::string(is_alpha ? "alpha" : "beta") + "_" +
                                            std::to_string(id.index) + ".csv",
                                        prof.to_csv()});
    }
    elements.push_back(el);
  }
  c.data = json{{"elements", elements}, {"h", g.h}, {"param_step", g.param_step}};
  return out;
}

CheckOutput check_identities(const Context& ctx) {
  const auto& cfg = ctx.cfg;
  const auto& g = cfg.identities;
  const int n = ctx.cd.n();
  CheckOutput out;
  Check& c = out.check;
  c.name = "identities";
  auto rng = check_rng(cfg.seed, c.name);

  const toda::DiskGreen gd{g.green_radius};
  double boundary = 0.0, symmetry = 0.0;
  for (int k = 0; k < g.green_points; ++k) {
    const C y = std::polar(gd.R * std::sqrt(uniform01(rng)) * 0.95, 2.0 * std::numbers::pi * uniform01(rng));
    const C eta_b = std::polar(gd.R, 2.0 * std::numbers::pi * uniform01(rng));
    const C eta = std::polar(gd.R * std::sqrt(uniform01(rng)) * 0.95, 2.0 * std::numbers::pi * uniform01(rng));
    boundary = std::max(boundary, std::abs(toda::green(gd, y, eta_b)));
    symmetry = std::max(symmetry, std::abs(toda::green(gd, y, eta) - toda::green(gd, eta, y)));
  }
  c.add(Metric::upper("green_boundary", boundary, cfg.tol.green));
  c.add(Metric::upper("green_symmetry", symmetry, cfg.tol.green));

  double delta = 0.0;
  const C y0 = std::polar(0.4 * gd.R, 2.0 * std::numbers::pi * uniform01(rng));
  for (const auto& b : {toda::PolynomialBump{gd.R, 2, 0, false}, toda::PolynomialBump{gd.R, 3, 1, false},
                        toda::PolynomialBump{gd.R, 2, 2, true}}) {
    for (const C y : {y0, C(0.0, 0.0)}) {
      const auto d = toda::delta_reproduction(gd, y, b);
      delta = std::max(delta, std::abs(d.integral - d.expected));
    }
  }
  c.add(Metric::upper("delta_reproduction", delta, cfg.tol.delta));

  // Model field phi^i = (d_i cos t + q_i sin t)/r: the ring integral is 2 pi sum(a d + b q).
  {
    std::vector<double> d(n), q(n);
    std::vector<toda::Gradient> grads(n);
    for (int i = 0; i < n; ++i) {
      d[i] = 2.0 * uniform01(rng) - 1.0;
      q[i] = 2.0 * uniform01(rng) - 1.0;
      grads[i] = {2.0 * uniform01(rng) - 1.0, 2.0 * uniform01(rng) - 1.0};
    }
    double pairing = 0.0;
    for (int i = 0; i < n; ++i) pairing += grads[i].a * d[i] + grads[i].b * q[i];
    const double val = toda::ring_orthogonality(
        [&](C z) {
          std::vector<double> v(n);
          const double r = std::abs(z), t = std::arg(z);
          for (int i = 0; i < n; ++i) v[i] = (d[i] * std::cos(t) + q[i] * std::sin(t)) / r;
          return v;
        },
        grads, 10.0);
    c.add(Metric::abs("model_ring_integral", val, 2.0 * std::numbers::pi * pairing, cfg.tol.model_integral));
  }

  json elements = json::array();
  for (const auto id : kernel_params(ctx)) {
    const bool first = carries_first_order(ctx.cd, id);
    if (!first && !(id.kind == ParamId::Kind::Lambda && id.index == 1)) continue;
    const std::string tag = id.name();
    const toda::KernelElement ke(ctx.sol, id, toda::DerivativeMode::Analytic);
    json el{{"param", tag}};

    std::vector<toda::PolyField> hbar(n);
    const int m = first ? n + 1 - id.index : 1;
    if (first && id.kind == ParamId::Kind::Beta)
      hbar[m - 1].c2 = 1.0;
    else
      hbar[m - 1].c1 = 1.0;
    for (const auto& h : g.hbar) {
      auto& f = hbar[h.component - 1];
      f.c0 += h.c0, f.c1 += h.c1, f.c2 += h.c2, f.c11 += h.c11, f.c12 += h.c12, f.c22 += h.c22;
    }
    const auto ibp = toda::ibp_check(ke, hbar, g.ibp_radius);
    c.add(Metric::upper(tag + ".ibp_difference", ibp.difference,
                        std::max(cfg.tol.ibp_abs, cfg.tol.ibp_rel * std::abs(ibp.lhs))));
    el["ibp"] = json{{"lhs", ibp.lhs}, {"rhs", ibp.rhs}, {"lhs_error", ibp.lhs_error}, {"R", g.ibp_radius}};

    if (first) {
      // Responses to each gradient slot at the largest radius.
      const double r = g.orth_radii.empty() ? g.ibp_radius : g.orth_radii.back();
      double diag = 0.0, cross = 0.0;
      for (int l = 1; l <= n; ++l) {
        for (int slot = 0; slot < 2; ++slot) {
          std::vector<toda::Gradient> gr(n);
          (slot == 0 ? gr[l - 1].a : gr[l - 1].b) = 1.0;
          const double v = toda::ring_orthogonality([&ke](C z) { return ke.phi_up(z); }, gr, r, 128,
                                                    ke.base().branch().cut_angle);
          const bool is_diag = l == m && slot == (id.kind == ParamId::Kind::Alpha ? 0 : 1);
          if (is_diag)
            diag = v;
          else
            cross = std::max(cross, std::abs(v));
        }
      }
      c.add(Metric::upper(tag + ".cross_response", cross / std::abs(diag), cfg.tol.cross_response));

      std::vector<toda::Gradient> gr(n);
      (id.kind == ParamId::Kind::Alpha ? gr[m - 1].a : gr[m - 1].b) = 1.0;
      std::vector<double> radii = g.orth_radii;
      std::sort(radii.begin(), radii.end());
      const auto prof = toda::decay_profile(ke, radii);
      json conv = json::array();
      double k_last = 0.0;
      for (double rr : radii) {
        const auto o = toda::orthogonality_integral(ke, gr, rr, prof);
        conv.push_back(json{{"r", rr}, {"integral", o.integral}, {"fitted_K", o.fitted_K}});
        k_last = o.fitted_K;
      }
      // The constant is reported, not asserted: compare against pi and 2 pi in the data block.
      c.add(Metric::info(tag + ".fitted_K", k_last, 1e-6));
      el["orthogonality"] = json{{"convergence", conv},
                                 {"fitted_K", k_last},
                                 {"K_pi", std::numbers::pi},
                                 {"K_2pi", 2.0 * std::numbers::pi},
                                 {"K_over_pi", k_last / std::numbers::pi},
                                 {"d", prof.d},
                                 {"q", prof.q}};
    }
    elements.push_back(el);
  }
  c.data = json{{"elements", elements}, {"green_radius", g.green_radius}};
  return out;
}

CheckOutput run_check(const std::string& name, const Context& ctx) {
  try {
    if (name == "construct") return check_construct(ctx);
    if (name == "residual") return check_residual(ctx);
    if (name == "mass") return check_mass(ctx);
    if (name == "expand") return check_expand(ctx);
    if (name == "linearize") return check_linearize(ctx);
    if (name == "identities") return check_identities(ctx);
    throw toda::ConfigurationError("unknown check '" + name + "'");
  } catch (const std::exception& e) {
    CheckOutput out;
    out.check.name = name;
    out.check.error = e.what();
    return out;
  }
}

}  // namespace todacli
