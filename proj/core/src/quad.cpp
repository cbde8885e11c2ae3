#include "toda/quad.hpp"

#include <cmath>
#include <numbers>

#include "toda/errors.hpp"

namespace toda {

namespace {

// Node at parameter t: distance-accurate abscissa and weight (without the step).
struct Node {
  double x;
  double w;
};

Node ts_node(double t, double a, double b) {
  const double hw = 0.5 * (b - a);
  const double u = 0.5 * std::numbers::pi * std::sinh(t);
  const double cu = std::cosh(u);
  const double w = hw * 0.5 * std::numbers::pi * std::cosh(t) / (cu * cu);
  // 1 + tanh(u) = 2 / (1 + e^{-2u}) keeps full relative accuracy near the ends.
  const double x = t <= 0.0 ? a + hw * 2.0 / (1.0 + std::exp(-2.0 * u))
                            : b - hw * 2.0 / (1.0 + std::exp(2.0 * u));
  return {x, w};
}

}  // namespace

QuadResult tanh_sinh(const std::function<std::vector<double>(double)>& f, double a, double b,
                     const TanhSinhOptions& opt) {
  if (!(b > a)) throw ConfigurationError("tanh_sinh: need a < b");
  QuadResult res;
  std::vector<double> sum;
  auto add = [&](double t) {
    const Node nd = ts_node(t, a, b);
    if (!(nd.x > a && nd.x < b) || nd.w == 0.0) return;
    const auto v = f(nd.x);
    ++res.evaluations;
    if (sum.empty()) sum.assign(v.size(), 0.0);
    for (std::size_t i = 0; i < v.size(); ++i) sum[i] += nd.w * v[i];
  };

  double h = 1.0;
  const int kmax = static_cast<int>(opt.t_max / h);
  for (int k = -kmax; k <= kmax; ++k) add(k * h);
  std::vector<double> prev;
  for (auto v : sum) prev.push_back(v * h);

  for (int level = 1; level <= opt.max_level; ++level) {
    h *= 0.5;
    const int kk = static_cast<int>(opt.t_max / h);
    for (int k = 1; k <= kk; k += 2) {
      add(k * h);
      add(-k * h);
    }
    std::vector<double> cur(sum.size());
    bool done = level >= 3;
    res.error.assign(sum.size(), 0.0);
    for (std::size_t i = 0; i < sum.size(); ++i) cur[i] = sum[i] * h;
    const std::size_t mw = static_cast<std::size_t>(opt.magnitude_width);
    for (std::size_t i = 0; i < sum.size(); ++i) {
      res.error[i] = std::abs(cur[i] - prev[i]);
      const double scale = mw > 0 ? std::abs(cur[sum.size() - mw + i % mw]) : std::abs(cur[i]);
      if (res.error[i] > std::max(opt.abs_tol, opt.rel_tol * scale)) done = false;
    }
    prev = std::move(cur);
    if (done) break;
  }
  res.value = std::move(prev);
  if (res.error.empty()) res.error.assign(res.value.size(), 0.0);
  return res;
}

double periodic_mean(const std::function<double(double)>& f, int points, double offset) {
  if (points < 1) throw ConfigurationError("periodic_mean: need at least one point");
  double acc = 0.0;
  for (int j = 0; j < points; ++j) acc += f(offset + 2.0 * std::numbers::pi * j / points);
  return acc / points;
}

QuadResult disk_integral(const std::function<std::vector<double>(std::complex<double>)>& f,
                         double R, const DiskOptions& opt) {
  if (!(R > 0.0)) throw ConfigurationError("disk_integral: radius must be positive");
  if (opt.angles < 4 || opt.angles % 2 != 0)
    throw ConfigurationError("disk_integral: angles must be even and >= 4");
  if (opt.panels_per_decade < 1) throw ConfigurationError("disk_integral: panels_per_decade must be >= 1");
  std::vector<double> edges{0.0};
  const double ratio = std::pow(10.0, 1.0 / opt.panels_per_decade);
  for (double p = opt.first_panel; p < R * (1.0 - 1e-12); p *= ratio) edges.push_back(p);
  edges.push_back(R);

  // Node j of a ring with N angles sits at offset + j 2 pi / N; the offset is
  // half a step of the coarsest ring so refinements reuse earlier nodes.
  const double offset = opt.angle_offset + std::numbers::pi / opt.angles;
  int evaluations = 1;
  std::size_t width = f(std::polar(0.5 * R, offset)).size();
  auto ring = [&](double r) {
    // sum over nodes j = start, start + stride, ... < N
    // sums of f and |f|, interleaved
    auto partial = [&](int N, int start, int stride) {
      std::vector<double> acc;
      for (int j = start; j < N; j += stride) {
        const auto v = f(std::polar(r, offset + 2.0 * std::numbers::pi * j / N));
        ++evaluations;
        if (acc.empty()) acc.assign(2 * v.size(), 0.0);
        for (std::size_t i = 0; i < v.size(); ++i) {
          acc[2 * i] += v[i];
          acc[2 * i + 1] += std::abs(v[i]);
        }
      }
      return acc;
    };
    int N = opt.angles;
    auto even = partial(N, 0, 2);
    const auto odd = partial(N, 1, 2);
    const std::size_t w = even.size() / 2;
    std::vector<double> sum(even.size()), prev(w), cur(w), mag(w);
    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] = even[i] + odd[i];
    for (std::size_t i = 0; i < w; ++i) prev[i] = even[2 * i] / (N / 2);
    while (true) {
      bool ok = true;
      for (std::size_t i = 0; i < w; ++i) {
        cur[i] = sum[2 * i] / N;
        mag[i] = sum[2 * i + 1] / N;
        // against the ring mean of |f|: rings where f nearly cancels would never converge relatively
        if (std::abs(cur[i] - prev[i]) > opt.angular_tol * mag[i]) ok = false;
      }
      if (ok || 2 * N > opt.max_angles) break;
      prev = cur;
      const auto fresh = partial(2 * N, 1, 2);
      for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += fresh[i];
      N *= 2;
    }
    const double scale = 2.0 * std::numbers::pi * r;
    std::vector<double> out;
    for (double v : cur) out.push_back(v * scale);
    for (double v : prev) out.push_back(v * scale);
    for (double v : mag) out.push_back(v * scale);
    return out;
  };

  QuadResult total;
  // Panels whose estimate is poor get bisected; sharp peaks otherwise slip between nodes.
  std::function<void(double, double, int)> panel = [&](double a, double b, int depth) {
    auto radial = opt.radial;
    radial.magnitude_width = static_cast<int>(width);
    const auto part = tanh_sinh(ring, a, b, radial);
    if (total.value.empty()) {
      total.value.assign(width, 0.0);
      total.error.assign(width, 0.0);
    }
    bool ok = true;
    for (std::size_t i = 0; i < width; ++i) {
      const double err = part.error[i] + std::abs(part.value[i] - part.value[width + i]);
      if (err > opt.split_tol * part.value[2 * width + i]) ok = false;
    }
    if (!ok && depth < opt.max_splits) {
      const double mid = std::sqrt(a * b) > a ? std::sqrt(a * b) : 0.5 * (a + b);
      panel(a, mid, depth + 1);
      panel(mid, b, depth + 1);
      return;
    }
    for (std::size_t i = 0; i < width; ++i) {
      total.value[i] += part.value[i];
      total.error[i] += part.error[i] + std::abs(part.value[i] - part.value[width + i]);
    }
  };
  for (std::size_t p = 0; p + 1 < edges.size(); ++p) panel(edges[p], edges[p + 1], 0);
  total.evaluations = evaluations;
  return total;
}

std::vector<double> flux_identity(const CartanData& cd) {
  const int n = cd.n();
  const double pi4 = 4.0 * std::numbers::pi;
  std::vector<double> out(n, 0.0);
  for (int j = 1; j <= n; ++j)
    for (int i = 1; i <= n; ++i)
      out[j - 1] += cd.ainv(j, i) * (pi4 * cd.gamma(i) + 2.0 * pi4 + pi4 * cd.gamma(n + 1 - i));
  return out;
}

std::vector<MassReport> masses(const TodaSolution& sol, double R, const DiskOptions& opt) {
  if (!(R >= 10.0)) throw ConfigurationError("mass: truncation radius must be >= 10");
  const auto& cd = sol.cartan();
  const int n = cd.n();
  const auto predicted = flux_identity(cd);
  DiskOptions o = opt;
  o.angle_offset = sol.branch().cut_angle;

  auto ring_mean = [&](double r) {
    std::vector<double> acc(n, 0.0);
    const int na = o.angles;
    for (int j = 0; j < na; ++j) {
      const auto e = sol.exp_lower(std::polar(r, o.angle_offset + (j + 0.5) * 2.0 * std::numbers::pi / na));
      for (int i = 0; i < n; ++i) acc[i] += e[i] / na;
    }
    return acc;
  };

  double radius = R;
  for (int attempt = 1; attempt <= 3; ++attempt, radius *= 10.0) {
    const auto outer = ring_mean(radius);
    const auto inner = ring_mean(0.5 * radius);
    std::vector<MassReport> out(n);
    bool stable = true;
    for (int i = 1; i <= n; ++i) {
      auto& m = out[i - 1];
      m.component = i;
      m.predicted = predicted[i - 1];
      m.radius = radius;
      m.attempts = attempt;
      m.predicted_slope = decay_exponent(cd, i);
      m.local_slope = std::log(outer[i - 1] / inner[i - 1]) / std::log(2.0);
      if (std::abs(m.local_slope - m.predicted_slope) > 0.05 * std::abs(m.predicted_slope))
        stable = false;
      const double p = m.predicted_slope;
      const double scale = 2.0 * std::numbers::pi * outer[i - 1] * radius * radius;
      m.tail = scale / (-(p + 2.0));
      // Same model with the measured slope; the difference bounds the O(r^-1) correction.
      m.tail_error = std::abs(m.tail - scale / (-(m.local_slope + 2.0)));
    }
    if (!stable) continue;
    const auto q = disk_integral([&](std::complex<double> z) { return sol.exp_lower(z); }, radius, o);
    for (int i = 0; i < n; ++i) {
      out[i].quadrature = q.value[i];
      out[i].value = q.value[i] + out[i].tail;
      out[i].error = q.error[i] + out[i].tail_error;
    }
    return out;
  }
  throw ConfigurationError("mass: local decay slope does not match the predicted exponent up to R = " +
                           std::to_string(radius / 10.0));
}

MassReport mass(const TodaSolution& sol, int i, double R, const DiskOptions& opt) {
  if (i < 1 || i > sol.n()) throw RangeError("mass: component outside 1..n");
  return masses(sol, R, opt)[i - 1];
}

void to_json(nlohmann::json& j, const MassReport& r) {
  j = nlohmann::json{{"component", r.component},     {"value", r.value},
                     {"quadrature", r.quadrature},   {"error", r.error},
                     {"tail", r.tail},               {"tail_error", r.tail_error},
                     {"predicted", r.predicted},     {"radius", r.radius},
                     {"local_slope", r.local_slope}, {"predicted_slope", r.predicted_slope},
                     {"attempts", r.attempts}};
}

}  // namespace toda
