#include "toda/solution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "toda/errors.hpp"

namespace toda {

const char* to_string(Precision p) { return p == Precision::Double ? "double" : "extended"; }

namespace {

void check_point(std::complex<double> z) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
    throw DomainError("evaluation point is not finite");
  if (z == std::complex<double>(0.0)) throw DomainError("evaluation at z = 0");
}

#if defined(__SIZEOF_FLOAT128__)
using Wide = __float128;
#else
using Wide = long double;
#endif

// Only arithmetic is needed, so no quad-precision math library.
struct WideComplex {
  Wide re = 0, im = 0;
  WideComplex() = default;
  WideComplex(Wide r, Wide i) : re(r), im(i) {}
  explicit WideComplex(std::complex<long double> z) : re(z.real()), im(z.imag()) {}
  WideComplex operator+(const WideComplex& o) const { return {re + o.re, im + o.im}; }
  WideComplex operator-(const WideComplex& o) const { return {re - o.re, im - o.im}; }
  WideComplex operator*(const WideComplex& o) const { return {re * o.re - im * o.im, re * o.im + im * o.re}; }
  WideComplex operator*(Wide s) const { return {re * s, im * s}; }
  WideComplex operator/(const WideComplex& o) const {
    const Wide d = o.re * o.re + o.im * o.im;
    return {(re * o.re + im * o.im) / d, (im * o.re - re * o.im) / d};
  }
  Wide norm() const { return re * re + im * im; }
};

// Gaussian elimination with partial pivoting on a row-major m x m matrix.
WideComplex wide_determinant(std::vector<WideComplex> a, int m) {
  WideComplex det(1, 0);
  for (int k = 0; k < m; ++k) {
    int piv = k;
    for (int i = k + 1; i < m; ++i)
      if (a[i * m + k].norm() > a[piv * m + k].norm()) piv = i;
    if (a[piv * m + k].norm() == 0) return {};
    if (piv != k) {
      for (int j = 0; j < m; ++j) std::swap(a[k * m + j], a[piv * m + j]);
      det = det * Wide(-1);
    }
    det = det * a[k * m + k];
    for (int i = k + 1; i < m; ++i) {
      const WideComplex f = a[i * m + k] / a[k * m + k];
      for (int j = k + 1; j < m; ++j) a[i * m + j] = a[i * m + j] - f * a[k * m + j];
    }
  }
  return det;
}

// All m-subsets of {0..n} in lexicographic order.
std::vector<std::vector<int>> subsets(int n, int m) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(m);
  for (int k = 0; k < m; ++k) cur[k] = k;
  while (true) {
    out.push_back(cur);
    int k = m - 1;
    while (k >= 0 && cur[k] == n + 1 - m + k) --k;
    if (k < 0) break;
    ++cur[k];
    for (int l = k + 1; l < m; ++l) cur[l] = cur[l - 1] + 1;
  }
  return out;
}

template <std::floating_point T>
detail::Kernel<T> make_kernel(const CartanData& cd, const SolutionParams& params) {
  detail::Kernel<T> k;
  const int n = cd.n();
  for (int i = 0; i <= n; ++i) k.q.push_back(build_q<T>(cd, params, i));
  k.minors.resize(n);
  for (int m = 1; m <= n; ++m) {
    for (auto& s : subsets(n, m)) {
      std::vector<GenPoly<T>> cols;
      T log_lambda = 0;
      for (int i : s) {
        cols.push_back(k.q[i]);
        log_lambda += std::log(static_cast<T>(params.lambda[i]));
      }
      auto w = wronskian<T>(cols);
      if (w.empty()) continue;
      k.minors[m - 1].push_back(detail::Minor<T>{std::move(s), log_lambda, std::move(w)});
    }
  }
  return k;
}

// Factor out the dominant power: the largest exponent for |z| >= 1, the
// smallest below, so the remaining powers of |z| are all <= 1.
template <std::floating_point T>
T reference_exponent(const GenPoly<T>& w, T log_r) {
  return log_r >= 0 ? w.top_exponent() : w.terms().front().exponent;
}

template <std::floating_point T>
T kernel_log_det(const detail::Kernel<T>& k, int m, std::complex<double> zd, const Branch& br) {
  const std::complex<T> z(static_cast<T>(zd.real()), static_cast<T>(zd.imag()));
  const T log_r = std::log(std::abs(z));
  const auto& minors = k.minors[m - 1];
  std::vector<T> logs(minors.size());
  T best = -std::numeric_limits<T>::infinity();
  for (std::size_t s = 0; s < minors.size(); ++s) {
    const auto& mi = minors[s];
    const T top = reference_exponent(mi.w, log_r);
    const T mag = std::norm(mi.w.eval_relative(z, top, br));
    logs[s] = mag > 0 ? mi.log_lambda + T(2) * top * log_r + std::log(mag)
                      : -std::numeric_limits<T>::infinity();
    best = std::max(best, logs[s]);
  }
  if (!std::isfinite(best)) throw InvalidSolutionError("det_m(f) vanished or overflowed");
  T acc = 0;
  for (T l : logs) acc += std::exp(l - best);
  return best + std::log(acc);
}

template <std::floating_point T>
T kernel_directional(const detail::Kernel<T>& k, const detail::DirectionKernel<T>& dk, int m,
                     std::complex<double> zd, const Branch& br) {
  const std::complex<T> z(static_cast<T>(zd.real()), static_cast<T>(zd.imag()));
  const T log_r = std::log(std::abs(z));
  const auto& minors = k.minors[m - 1];
  const auto& dterms = dk.terms[m - 1];
  struct Piece {
    T log_weight;
    T mag;
    T dmag;
  };
  std::vector<Piece> pieces(minors.size());
  T best = -std::numeric_limits<T>::infinity();
  for (std::size_t s = 0; s < minors.size(); ++s) {
    const auto& mi = minors[s];
    const T top = reference_exponent(mi.w, log_r);
    const auto v = mi.w.eval_relative(z, top, br);
    const auto dv = dterms[s].second.empty() ? std::complex<T>(0)
                                             : dterms[s].second.eval_relative(z, top, br);
    const T mag = std::norm(v);
    pieces[s] = {mi.log_lambda + T(2) * top * log_r, mag,
                 dterms[s].first * mag + T(2) * std::real(std::conj(v) * dv)};
    if (mag > 0) best = std::max(best, pieces[s].log_weight + std::log(mag));
  }
  T num = 0, den = 0;
  for (const auto& p : pieces) {
    const T w = std::exp(p.log_weight - best);
    num += w * p.dmag;
    den += w * p.mag;
  }
  return num / den;
}

template <std::floating_point T>
detail::DirectionKernel<T> make_direction_kernel(const detail::Kernel<T>& k, const CartanData& cd,
                                                 const SolutionParams& params,
                                                 const ParamDirection& dir) {
  const int n = cd.n();
  std::vector<T> dlog_lambda(n + 1, T(0));
  if (!dir.dlambda.empty()) {
    if (dir.dlambda.size() != static_cast<std::size_t>(n) + 1)
      throw ValidationError("dlambda", "expected n+1 entries");
    for (int i = 0; i <= n; ++i)
      dlog_lambda[i] = static_cast<T>(dir.dlambda[i]) / static_cast<T>(params.lambda[i]);
  }
  // dq_i = sum_j dc_ij z^{s_j}
  std::vector<GenPoly<T>> dq(n + 1);
  for (const auto& [i, j, v] : dir.dc) {
    if (i < 1 || i > n || j < 0 || j >= i) throw RangeError("direction: coefficient index");
    dq[i] = dq[i] + GenPoly<T>::monomial(
                        std::complex<T>(static_cast<T>(v.real()), static_cast<T>(v.imag())),
                        static_cast<T>(cd.s_extended(j)));
  }

  detail::DirectionKernel<T> out;
  out.terms.resize(n);
  for (int m = 1; m <= n; ++m) {
    for (const auto& mi : k.minors[m - 1]) {
      T dl = 0;
      GenPoly<T> dw;
      for (std::size_t c = 0; c < mi.subset.size(); ++c) {
        const int i = mi.subset[c];
        dl += dlog_lambda[i];
        if (dq[i].empty()) continue;
        std::vector<GenPoly<T>> cols;
        for (int idx : mi.subset) cols.push_back(k.q[idx]);
        cols[c] = dq[i];
        dw = dw + wronskian<T>(cols);
      }
      out.terms[m - 1].emplace_back(dl, std::move(dw));
    }
  }
  return out;
}

}  // namespace

TodaSolution::TodaSolution(CartanData cd, SolutionParams params, Precision precision,
                           Branch branch)
    : cd_(std::move(cd)), params_(std::move(params)), precision_(precision), branch_(branch) {
  check_structure(cd_, params_);
  build();
}

void TodaSolution::build() {
  const int n = cd_.n();
  q_table_.assign(n + 1, {});
  q_table_ld_.assign(n + 1, {});
  for (int i = 0; i <= n; ++i) {
    q_table_[i].push_back(build_q<double>(cd_, params_, i));
    q_table_ld_[i].push_back(build_q<long double>(cd_, params_, i));
    for (int p = 1; p <= n; ++p) {
      q_table_[i].push_back(q_table_[i][p - 1].derivative());
      q_table_ld_[i].push_back(q_table_ld_[i][p - 1].derivative());
    }
  }
  using V = std::variant<detail::Kernel<double>, detail::Kernel<long double>>;
  if (precision_ == Precision::Double)
    kernel_ = std::make_shared<const V>(make_kernel<double>(cd_, params_));
  else
    kernel_ = std::make_shared<const V>(make_kernel<long double>(cd_, params_));
}

TodaSolution TodaSolution::with_params(SolutionParams params) const {
  return TodaSolution(cd_, std::move(params), precision_, branch_);
}

TodaSolution TodaSolution::with_branch(Branch branch) const {
  TodaSolution out = *this;
  out.branch_ = branch;
  return out;
}

TodaSolution TodaSolution::with_precision(Precision precision) const {
  return TodaSolution(cd_, params_, precision, branch_);
}

const GenPoly<double>& TodaSolution::q(int i) const { return q_derivative(i, 0); }

const GenPoly<double>& TodaSolution::q_derivative(int i, int p) const {
  if (i < 0 || i > n()) throw RangeError("q index outside 0..n");
  if (p < 0 || p > n()) throw RangeError("derivative order outside 0..n");
  return q_table_[i][p];
}

std::complex<double> TodaSolution::f_mixed(int p, int q, std::complex<double> z) const {
  check_point(z);
  std::complex<double> acc(0.0);
  for (int i = 0; i <= n(); ++i) {
    acc += params_.lambda[i] * q_derivative(i, p).eval(z, branch_) *
           std::conj(q_derivative(i, q).eval(z, branch_));
  }
  return acc;
}

Eigen::MatrixXcd TodaSolution::mixed_matrix(int m, std::complex<double> z) const {
  if (m < 1 || m > n() + 1) throw RangeError("mixed_matrix: order outside 1..n+1");
  check_point(z);
  std::vector<std::vector<std::complex<double>>> vals(n() + 1);
  for (int i = 0; i <= n(); ++i)
    for (int p = 0; p < m; ++p) vals[i].push_back(q_derivative(i, p).eval(z, branch_));
  Eigen::MatrixXcd out(m, m);
  for (int p = 0; p < m; ++p) {
    for (int q = 0; q < m; ++q) {
      std::complex<double> acc(0.0);
      for (int i = 0; i <= n(); ++i) acc += params_.lambda[i] * vals[i][p] * std::conj(vals[i][q]);
      out(p, q) = acc;
    }
  }
  return out;
}

double TodaSolution::log_det(int m, std::complex<double> z) const {
  if (m < 1 || m > n()) throw RangeError("m outside 1..n");
  check_point(z);
  return std::visit(
      [&](const auto& k) { return static_cast<double>(kernel_log_det(k, m, z, branch_)); },
      *kernel_);
}

double TodaSolution::log_exp_neg_Um(int m, std::complex<double> z) const {
  return m * (m - 1) * std::numbers::ln2 + log_det(m, z);
}

double TodaSolution::exp_neg_Um(int m, std::complex<double> z) const {
  const double v = std::exp(log_exp_neg_Um(m, z));
  if (!std::isfinite(v)) throw DomainError("e^{-U^m} overflows double; use log_exp_neg_Um");
  if (!(v > 0.0)) throw InvalidSolutionError("e^{-U^m} is not positive");
  return v;
}

std::complex<double> TodaSolution::direct_determinant(int m, std::complex<double> z) const {
  if (m < 1 || m > n() + 1) throw RangeError("direct_determinant: order outside 1..n+1");
  check_point(z);
  using CL = std::complex<long double>;
  const CL zl(z.real(), z.imag());
  std::vector<std::vector<CL>> vals(n() + 1);
  for (int i = 0; i <= n(); ++i)
    for (int p = 0; p < m; ++p) vals[i].push_back(q_table_ld_[i][p].eval(zl, branch_));
  // f^(p,q) is a Gram matrix, so its determinant is conditioned like the
  // square of the q-derivative vectors: form it and eliminate in wide precision.
  std::vector<WideComplex> M(m * m);
  for (int p = 0; p < m; ++p)
    for (int q = 0; q < m; ++q) {
      WideComplex acc;
      for (int i = 0; i <= n(); ++i)
        acc = acc + WideComplex(vals[i][p]) * WideComplex(std::conj(vals[i][q])) * Wide(params_.lambda[i]);
      M[p * m + q] = acc;
    }
  // rows and columns scale like r^{-p}
  long double log_scale = 0.0L;
  for (int p = 0; p < m; ++p) {
    const long double d = std::sqrt(std::abs(static_cast<long double>(M[p * m + p].re)));
    if (!(d > 0.0L)) continue;
    for (int k = 0; k < m; ++k) {
      M[p * m + k] = M[p * m + k] * Wide(1.0L / d);
      M[k * m + p] = M[k * m + p] * Wide(1.0L / d);
    }
    log_scale += 2.0L * std::log(d);
  }
  const WideComplex det = wide_determinant(M, m);
  const CL d = CL(static_cast<long double>(det.re), static_cast<long double>(det.im)) * std::exp(log_scale);
  return {static_cast<double>(d.real()), static_cast<double>(d.imag())};
}

double TodaSolution::exp_neg_Um_direct(int m, std::complex<double> z, double realness_tol) const {
  if (m < 1 || m > n()) throw RangeError("m outside 1..n");
  const std::complex<double> det = direct_determinant(m, z);
  if (!(det.real() > 0.0) || std::abs(det.imag()) > realness_tol * std::abs(det))
    throw InvalidSolutionError("det_" + std::to_string(m) +
                               "(f) is not real positive; parameters do not define a solution");
  return std::ldexp(det.real(), m * (m - 1));
}

Potentials TodaSolution::potentials(std::complex<double> z) const {
  check_point(z);
  const int nn = n();
  Potentials out;
  out.upper.resize(nn);
  out.lower.assign(nn, 0.0);
  out.regular.resize(nn);
  for (int m = 1; m <= nn; ++m) out.upper[m - 1] = -log_exp_neg_Um(m, z);
  const double log_r = std::log(std::abs(z));
  for (int i = 1; i <= nn; ++i) {
    for (int m = std::max(1, i - 1); m <= std::min(nn, i + 1); ++m)
      out.lower[i - 1] += cd_.a(i, m) * out.upper[m - 1];
    out.regular[i - 1] = out.lower[i - 1] - 2.0 * cd_.gamma(i) * log_r;
  }
  return out;
}

std::vector<double> TodaSolution::exp_lower(std::complex<double> z) const {
  auto p = potentials(z);
  for (auto& v : p.lower) v = std::exp(v);
  return p.lower;
}

std::vector<double> TodaSolution::pde_residuals(std::complex<double> z, double h,
                                                const StencilOptions& stencil) const {
  check_point(z);
  const auto lap = laplacian([this](std::complex<double> w) { return potentials(w).regular; }, z,
                             h, stencil);
  const auto e = exp_lower(z);
  std::vector<double> out(n());
  for (int i = 1; i <= n(); ++i) {
    double acc = lap[i - 1];
    for (int j = std::max(1, i - 1); j <= std::min(n(), i + 1); ++j) acc += cd_.a(i, j) * e[j - 1];
    out[i - 1] = std::abs(acc);
  }
  return out;
}

double TodaSolution::pde_residual(int i, std::complex<double> z, double h,
                                  const StencilOptions& stencil) const {
  if (i < 1 || i > n()) throw RangeError("component index outside 1..n");
  return pde_residuals(z, h, stencil)[i - 1];
}

DirectionTable TodaSolution::direction_table(const ParamDirection& dir) const {
  DirectionTable t;
  std::visit(
      [&](const auto& k) { t.kernel = make_direction_kernel(k, cd_, params_, dir); }, *kernel_);
  return t;
}

double TodaSolution::log_det_directional(int m, std::complex<double> z,
                                         const DirectionTable& table) const {
  if (m < 1 || m > n()) throw RangeError("m outside 1..n");
  check_point(z);
  return std::visit(
      [&](const auto& k) -> double {
        using T = typename std::decay_t<decltype(k)>::real_type;
        const auto* dk = std::get_if<detail::DirectionKernel<T>>(&table.kernel);
        if (dk == nullptr) throw ConfigurationError("direction table precision mismatch");
        return static_cast<double>(kernel_directional(k, *dk, m, z, branch_));
      },
      *kernel_);
}

}  // namespace toda
