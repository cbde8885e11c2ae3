#include "toda/params.hpp"

#include <cmath>

#include "toda/errors.hpp"

namespace toda {

namespace {

std::string c_name(int i, int j) {
  return "c[" + std::to_string(i) + "," + std::to_string(j) + "]";
}

}  // namespace

SolutionParams::SolutionParams(int n)
    : lambda(static_cast<std::size_t>(n) + 1, 1.0),
      n_(n),
      c_(static_cast<std::size_t>(n) * (n + 1) / 2, {0.0, 0.0}) {
  if (n < 1) throw ValidationError("n", "rank must be at least 1");
}

void SolutionParams::check(int i, int j) const {
  if (i < 1 || i > n_ || j < 0 || j >= i)
    throw RangeError("coefficient index " + c_name(i, j) + " outside 0 <= j < i <= n");
}

std::complex<double> SolutionParams::c(int i, int j) const {
  if (i == j && i >= 0 && i <= n_) return 1.0;
  check(i, j);
  return c_[slot(i, j)];
}

void SolutionParams::set_c(int i, int j, std::complex<double> value) {
  check(i, j);
  c_[slot(i, j)] = value;
}

bool SolutionParams::rotational() const {
  for (const auto& v : c_)
    if (v != std::complex<double>(0.0)) return false;
  return true;
}

bool coefficient_allowed(const CartanData& cd, int i, int j) { return cd.integral_gap(i, j); }

void check_structure(const CartanData& cd, const SolutionParams& p) {
  if (p.n() != cd.n())
    throw ValidationError("n", "parameters built for rank " + std::to_string(p.n()) +
                                   ", Cartan data for rank " + std::to_string(cd.n()));
  if (p.lambda.size() != static_cast<std::size_t>(cd.n()) + 1)
    throw ValidationError("lambda", "expected n+1 entries");
  for (std::size_t i = 0; i < p.lambda.size(); ++i)
    if (!std::isfinite(p.lambda[i]) || p.lambda[i] <= 0.0)
      throw ValidationError("lambda[" + std::to_string(i) + "]", "must be positive and finite");
  for (int i = 1; i <= cd.n(); ++i) {
    for (int j = 0; j < i; ++j) {
      const auto v = p.c(i, j);
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
        throw ValidationError(c_name(i, j), "must be finite");
      if (v != std::complex<double>(0.0) && !coefficient_allowed(cd, i, j))
        throw ValidationError(c_name(i, j),
                              "must vanish: s_i - s_j is not an integer for this gamma");
    }
  }
}

ValidatedParams validate_params(const CartanData& cd, SolutionParams raw, bool autonormalize) {
  ValidatedParams out;
  if (autonormalize && raw.n() == cd.n()) {
    for (int i = 1; i <= cd.n(); ++i) {
      for (int j = 0; j < i; ++j) {
        if (raw.c(i, j) != std::complex<double>(0.0) && !coefficient_allowed(cd, i, j)) {
          raw.set_c(i, j, 0.0);
          out.coerced.push_back(c_name(i, j));
        }
      }
    }
  }
  check_structure(cd, raw);

  long double prod_rest = 1.0L;
  for (int i = 1; i <= cd.n(); ++i) prod_rest *= raw.lambda[i];
  const long double target = cd.lambda_product();
  if (autonormalize) {
    const double l0 = static_cast<double>(target / prod_rest);
    if (l0 != raw.lambda[0]) out.coerced.push_back("lambda[0]");
    raw.lambda[0] = l0;
    raw.normalized = true;
  } else {
    const long double prod = prod_rest * raw.lambda[0];
    raw.normalized = std::abs(prod / target - 1.0L) <= 1e-12L;
  }
  out.params = std::move(raw);
  return out;
}

}  // namespace toda
