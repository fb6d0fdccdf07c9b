#pragma once

// Closed-form entanglement values and analytic bounds.

#include <optional>
#include <vector>

#include "gesq/rational.hpp"
#include "gesq/tensor_core.hpp"

namespace gesq {

/// Tridiagonal matrix with diagonal (α, α+β, ..., α+β, β), superdiagonal g.
struct TridiagonalSpec {
  double alpha = 0.0;
  double beta = 0.0;
  Complex g = 0.0;
  int d = 2;

  /// |αβ - |g|^2| <= 1e-10, the condition under which the closed-form spectrum holds.
  bool closed_form_applies() const;
  CMatrix matrix() const;
};

/// α+β+2|g|cos(kπ/d) for k = 1..d-1 and 0, sorted descending. Throws
/// std::domain_error when the closed form does not apply.
std::vector<double> tridiagonal_spectrum(const TridiagonalSpec& spec);

struct CesValue {
  double value = 0.0;
  /// d = 2: the subspace is a single vector and the value is min{sin², cos²}(θ/2).
  bool single_vector = false;
};

/// GM of the two-party subspace S(2 x d, θ): ½(1 - √(1 - sin²θ sin²(π/d))).
CesValue gm_ces_exact(int d, double theta);
/// GGM of S(2 x d^{N-1}, θ); identical to the two-party value for every N.
CesValue ggm_ges_exact(int n_parties, int d, double theta);
/// Largest eigenvalue of the cut contraction, ½(1 + √(1 - sin²θ sin²(π/d))).
double ges_lambda_max(int d, double theta);

/// w_1 = w_2 = (d-1+cos(π/d))/d, w_3 = ((d-1)cos(π/d)+1)/d.
struct GmBoundTerms {
  double w1 = 0.0;
  double w2 = 0.0;
  double w3 = 0.0;
  static GmBoundTerms make(int d);
};

/// Upper bound on the GM of S(2 x d^{N-1}, π/2) from the sine-coordinate
/// product vector: 1 - (w_1^{N-1} + w_2^{N-1} + 2 w_3^{N-1}) / 4.
double gm_upper_bound_S(int n_parties, int d);
/// Same bound in exact arithmetic; available when cos(π/d) is rational (d = 2, 3).
std::optional<Rational> gm_upper_bound_S_exact(int n_parties, int d);

Rational antisym_gm(int n_parties);   // 1 - 1/N!
Rational antisym_ggm(int n_parties);  // 1 - 1/N

/// White-noise tolerance of the projector witness: D ε / (D - d_G).
double witness_threshold(Index total_dim, Index subspace_dim, double epsilon);
Rational witness_threshold_exact(Index total_dim, Index subspace_dim, const Rational& epsilon);

}  // namespace gesq
