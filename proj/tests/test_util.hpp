#pragma once

#include <random>

#include "gesq/tensor_core.hpp"

namespace gesq::testing {

inline CMatrix random_hermitian(Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  CMatrix a(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) a(i, j) = Complex(g(rng), g(rng));
  }
  return 0.5 * (a + a.adjoint());
}

inline CMatrix random_density(Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  CMatrix a(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) a(i, j) = Complex(g(rng), g(rng));
  }
  CMatrix rho = a * a.adjoint();
  return rho / rho.trace().real();
}

inline CVector ghz(int n_parties) {
  const Index dim = Index{1} << n_parties;
  CVector v = CVector::Zero(dim);
  v(0) = v(dim - 1) = 1.0 / std::sqrt(2.0);
  return v;
}

inline CMatrix projector_of(const CVector& v) { return v * v.adjoint(); }

}  // namespace gesq::testing
