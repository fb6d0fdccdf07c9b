#include "gesq/exact.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>

namespace gesq {
namespace {

void check_theta(double theta) {
  if (!(theta > 0.0 && theta < std::numbers::pi)) throw std::invalid_argument("theta must lie in (0, pi)");
}

Rational rational_pow(const Rational& base, int exp) {
  Rational r(1);
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

}  // namespace

bool TridiagonalSpec::closed_form_applies() const {
  return std::abs(alpha * beta - std::norm(g)) <= 1e-10;
}

CMatrix TridiagonalSpec::matrix() const {
  if (d < 2) throw std::invalid_argument("TridiagonalSpec: need d >= 2");
  CMatrix m = CMatrix::Zero(d, d);
  for (int i = 0; i < d; ++i) {
    m(i, i) = (i > 0 ? beta : 0.0) + (i < d - 1 ? alpha : 0.0);
    if (i + 1 < d) {
      m(i, i + 1) = g;
      m(i + 1, i) = std::conj(g);
    }
  }
  return m;
}

std::vector<double> tridiagonal_spectrum(const TridiagonalSpec& spec) {
  if (spec.d < 2) throw std::invalid_argument("tridiagonal_spectrum: need d >= 2");
  if (spec.alpha < 0.0 || spec.beta < 0.0) throw std::invalid_argument("tridiagonal_spectrum: alpha, beta must be >= 0");
  if (!spec.closed_form_applies()) {
    throw std::domain_error("tridiagonal_spectrum: alpha*beta != |g|^2, use a dense eigensolver");
  }
  std::vector<double> values;
  for (int k = 1; k < spec.d; ++k) {
    values.push_back(spec.alpha + spec.beta + 2.0 * std::abs(spec.g) * std::cos(k * std::numbers::pi / spec.d));
  }
  values.push_back(0.0);
  std::sort(values.begin(), values.end(), std::greater<>());
  return values;
}

CesValue gm_ces_exact(int d, double theta) {
  if (d < 2) throw std::invalid_argument("gm_ces_exact: need d >= 2");
  check_theta(theta);
  if (d == 2) {
    const double s = std::sin(theta / 2.0);
    const double c = std::cos(theta / 2.0);
    return {std::min(s * s, c * c), true};
  }
  return {1.0 - ges_lambda_max(d, theta), false};
}

CesValue ggm_ges_exact(int n_parties, int d, double theta) {
  if (n_parties < 2) throw std::invalid_argument("ggm_ges_exact: need N >= 2");
  return gm_ces_exact(d, theta);
}

double ges_lambda_max(int d, double theta) {
  if (d < 2) throw std::invalid_argument("ges_lambda_max: need d >= 2");
  check_theta(theta);
  const double s = std::sin(theta) * std::sin(std::numbers::pi / d);
  return 0.5 * (1.0 + std::sqrt(1.0 - s * s));
}

GmBoundTerms GmBoundTerms::make(int d) {
  if (d < 2) throw std::invalid_argument("GmBoundTerms: need d >= 2");
  const double c = std::cos(std::numbers::pi / d);
  const double w = (d - 1 + c) / d;
  return {w, w, ((d - 1) * c + 1.0) / d};
}

double gm_upper_bound_S(int n_parties, int d) {
  if (n_parties < 2) throw std::invalid_argument("gm_upper_bound_S: need N >= 2");
  const GmBoundTerms w = GmBoundTerms::make(d);
  const int e = n_parties - 1;
  return 1.0 - 0.25 * (std::pow(w.w1, e) + std::pow(w.w2, e) + 2.0 * std::pow(w.w3, e));
}

std::optional<Rational> gm_upper_bound_S_exact(int n_parties, int d) {
  if (n_parties < 2) throw std::invalid_argument("gm_upper_bound_S_exact: need N >= 2");
  Rational cosine;
  if (d == 2) {
    cosine = Rational(0);
  } else if (d == 3) {
    cosine = Rational(1, 2);
  } else {
    return std::nullopt;
  }
  const Rational w12 = (Rational(d - 1) + cosine) / d;
  const Rational w3 = (Rational(d - 1) * cosine + 1) / d;
  const int e = n_parties - 1;
  return Rational(1) - Rational(1, 4) * (2 * rational_pow(w12, e) + 2 * rational_pow(w3, e));
}

Rational antisym_gm(int n_parties) {
  if (n_parties < 2 || n_parties > 20) throw std::invalid_argument("antisym_gm: need 2 <= N <= 20");
  std::int64_t f = 1;
  for (int i = 2; i <= n_parties; ++i) f *= i;
  return Rational(1) - Rational(1, f);
}

Rational antisym_ggm(int n_parties) {
  if (n_parties < 2) throw std::invalid_argument("antisym_ggm: need N >= 2");
  return Rational(1) - Rational(1, n_parties);
}

double witness_threshold(Index total_dim, Index subspace_dim, double epsilon) {
  if (subspace_dim <= 0 || subspace_dim >= total_dim) {
    throw std::invalid_argument("witness_threshold: need 0 < dim_G < D");
  }
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument("witness_threshold: epsilon must lie in (0, 1)");
  return static_cast<double>(total_dim) * epsilon / static_cast<double>(total_dim - subspace_dim);
}

Rational witness_threshold_exact(Index total_dim, Index subspace_dim, const Rational& epsilon) {
  if (subspace_dim <= 0 || subspace_dim >= total_dim) {
    throw std::invalid_argument("witness_threshold: need 0 < dim_G < D");
  }
  if (epsilon <= Rational(0) || epsilon >= Rational(1)) throw std::invalid_argument("witness_threshold: epsilon must lie in (0, 1)");
  return Rational(total_dim) * epsilon / Rational(total_dim - subspace_dim);
}

}  // namespace gesq
