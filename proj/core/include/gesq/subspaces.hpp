#pragma once

// Constructors for the entangled-subspace families used throughout gesq.
//
//   S   span of a|0>|i_2..i_N> + b|1>|i_2+1..i_N+1>, i_m = 0..d-2, on C^2 ⊗ (C^d)^{N-1}
//   Q1  orthocomplement of the product family (α^{i p1})_i ⊗ (α^k)_k on (C^d)^N
//   Q2  orthocomplement of the product family (1, P_1(α), ...)_i ⊗ (α^k)_k on (C^d)^N
//   ASYM  antisymmetric subspace of (C^d)^N
//   WSPAN span{|W>, X^{⊗N}|W>} on N qubits

#include <string>
#include <string_view>
#include <vector>

#include "gesq/rational.hpp"
#include "gesq/tensor_core.hpp"

namespace gesq {

struct GesParams {
  int n_parties = 3;
  int d = 3;
  double theta = 1.5707963267948966;
  double xi = 0.0;

  Complex a() const;
  Complex b() const;
  /// Throws std::invalid_argument on N < 2, d < 2, theta outside (0, pi).
  void validate() const;
};

/// p1 = 1 + d + ... + d^{N-2}; p_i = i * p1.
struct Q1IndexScheme {
  int n_parties;
  int d;
  Index p1;

  static Q1IndexScheme make(int n_parties, int d);
  Index p(int i) const { return i * p1; }
};

/// Raw (as generated, unnormalized) spanning vectors next to the orthonormal
/// subspace they span.
struct SubspaceConstruction {
  std::vector<CVector> raw;
  Subspace subspace;
};

Subspace ces_2xd(int d, double theta, double xi = 0.0);
Subspace ges_2xd_pow(const GesParams& params);

/// Cyclic orthonormalization of the chain (γ_{k-1} - γ_k)/√2, k = 1..S.
/// Input: S+1 orthonormal vectors γ_0..γ_S. Output: φ_1..φ_S with
/// φ_m = (Σ_{i<m} γ_i - m γ_m) / √(m(m+1)).
std::vector<CVector> q1_cyclic_orthonormalize(std::span<const CVector> gammas);

SubspaceConstruction q1_construction(int n_parties, int d);
Subspace q1_subspace(int n_parties, int d);
/// Member of the product family that Q1 is orthogonal to.
CVector q1_product_vector(int n_parties, int d, Complex alpha);

/// Spanning vectors |0>(Σ_f |k d^{N-f} + m>) - |k>|m> for all (k, m) whose
/// kets fit inside (C^d)^{N-1}.
std::vector<CVector> q2_listed_vectors(int n_parties, int d);
SubspaceConstruction q2_construction(int n_parties, int d);
Subspace q2_subspace(int n_parties, int d);
CVector q2_product_vector(int n_parties, int d, Complex alpha);

Subspace antisymmetric_subspace(int d, int n_parties);
Subspace w_span_subspace(int n_parties);

/// Dispatch by label: "S", "Q1", "Q2", "ASYM", "WSPAN". Throws
/// std::invalid_argument for an unknown label.
Subspace construct_subspace(std::string_view label, int n_parties, int d,
                            double theta = 1.5707963267948966);

/// Exact projector onto S at theta = pi/2 (entries are 0 or 1/2).
RationalMatrix s_projector_exact(int n_parties, int d);

struct EquivalenceReport {
  bool equivalent = false;
  double projector_distance = 0.0;
  Index dim = 0;
};

/// Builds (|i>|1>|k+1> - |i+1>|0>|k>)/√2 on C^d ⊗ C^2 ⊗ C^d, applies
/// U = Σ|d-1-i><i| on the last party and iσ_y on the middle one, swaps the
/// first two parties and compares with S(N=3, d, pi/2).
EquivalenceReport verify_local_unitary_equivalence(int d);

struct PptStateReport {
  RationalMatrix exact;
  HermitianOp state;
  std::vector<double> min_pt_eigenvalues;  // one per cut, in Bipartition::all order
  Rational overlap_exact;                   // tr(P_S rho)
  double overlap = 0.0;
  Rational complement_exact;  // tr((I - P_S) rho), the relaxation objective at this point
  double complement = 0.0;
};

/// The 18x18 PPT state on C^2 ⊗ C^3 ⊗ C^3 with rational parameters
/// a = 9/10, b = 14/25, c = 7/25, x = 1/30, y = 1/14, z = 1/7, α = 7/25.
PptStateReport ppt_state_outside_s();

}  // namespace gesq
