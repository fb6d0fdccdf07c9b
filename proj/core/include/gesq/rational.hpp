#pragma once

// Small exact-arithmetic helpers for the handful of constants that admit a
// rational closed form.

#include <cstdint>
#include <string>
#include <vector>

#include <boost/rational.hpp>

#include "gesq/tensor_core.hpp"

namespace gesq {

using Rational = boost::rational<std::int64_t>;

inline double to_double(const Rational& r) {
  return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

inline std::string to_string(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

/// Dense row-major matrix of rationals (real entries only).
class RationalMatrix {
 public:
  RationalMatrix(Index rows, Index cols) : rows_(rows), cols_(cols), data_(rows * cols, Rational(0)) {}

  Index rows() const { return rows_; }
  Index cols() const { return cols_; }
  Rational& operator()(Index r, Index c) { return data_[r * cols_ + c]; }
  const Rational& operator()(Index r, Index c) const { return data_[r * cols_ + c]; }

  Rational trace() const {
    Rational t(0);
    for (Index i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
    return t;
  }

  CMatrix to_complex() const {
    CMatrix m(rows_, cols_);
    for (Index r = 0; r < rows_; ++r) {
      for (Index c = 0; c < cols_; ++c) m(r, c) = to_double((*this)(r, c));
    }
    return m;
  }

 private:
  Index rows_;
  Index cols_;
  std::vector<Rational> data_;
};

/// tr(A B) for square rational matrices of equal size.
inline Rational trace_of_product(const RationalMatrix& a, const RationalMatrix& b) {
  Rational t(0);
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      if (a(i, j) != Rational(0) && b(j, i) != Rational(0)) t += a(i, j) * b(j, i);
    }
  }
  return t;
}

}  // namespace gesq
