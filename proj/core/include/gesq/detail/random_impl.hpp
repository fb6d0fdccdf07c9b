#pragma once

#include <random>

namespace gesq {

template <class Rng>
CVector random_unit_vector(Index dim, Rng& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  CVector v(dim);
  for (Index i = 0; i < dim; ++i) v(i) = Complex(gauss(rng), gauss(rng));
  const double n = v.norm();
  return n > 0.0 ? CVector(v / n) : CVector(CVector::Unit(dim, 0));
}

}  // namespace gesq
