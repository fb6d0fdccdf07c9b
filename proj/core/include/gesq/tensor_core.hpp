#pragma once

// Dense complex linear algebra over multipartite Hilbert spaces.
//
// Indexing convention used everywhere in gesq: a joint basis state
// |i_0 i_1 ... i_{N-1}> maps to the flat index
//   i_0 * (d_1 ... d_{N-1}) + ... + i_{N-2} * d_{N-1} + i_{N-1},
// i.e. row-major with party 0 varying slowest. Parties are 0-based.

#include <complex>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace gesq {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using Index = Eigen::Index;

/// Ordered local dimensions of an N-party system.
class HilbertSpace {
 public:
  explicit HilbertSpace(std::vector<int> dims);
  static HilbertSpace uniform(int parties, int local_dim);

  int parties() const { return static_cast<int>(dims_.size()); }
  int local_dim(int party) const { return dims_.at(party); }
  const std::vector<int>& dims() const { return dims_; }
  Index total_dim() const { return total_; }
  Index stride(int party) const { return strides_.at(party); }

  std::vector<int> multi_index(Index flat) const;
  Index flat_index(std::span<const int> digits) const;

  /// Subsystem made of the listed parties, in the listed order.
  HilbertSpace restricted(std::span<const int> parties) const;

  bool operator==(const HilbertSpace& other) const { return dims_ == other.dims_; }

 private:
  std::vector<int> dims_;
  std::vector<Index> strides_;
  Index total_ = 1;
};

/// A cut K|K̄ of the parties. Stored canonically with party 0 in K.
class Bipartition {
 public:
  Bipartition(std::vector<int> parties, int n_parties);

  const std::vector<int>& side() const { return side_; }
  std::vector<int> complement() const;
  int n_parties() const { return n_parties_; }
  bool contains(int party) const;
  std::vector<bool> mask() const;
  std::string to_string() const;

  /// All 2^(N-1) - 1 distinct cuts, ordered by the bitmask of K.
  static std::vector<Bipartition> all(int n_parties);

  bool operator==(const Bipartition& other) const {
    return n_parties_ == other.n_parties_ && side_ == other.side_;
  }

 private:
  std::vector<int> side_;
  int n_parties_;
};

class PureState {
 public:
  PureState(HilbertSpace space, CVector amplitudes);

  const HilbertSpace& space() const { return space_; }
  const CVector& amplitudes() const { return amplitudes_; }
  double norm() const { return amplitudes_.norm(); }
  PureState normalized() const;

  static PureState basis(const HilbertSpace& space, std::span<const int> digits);

 private:
  HilbertSpace space_;
  CVector amplitudes_;
};

/// Hermitian operator on a HilbertSpace. The constructor symmetrizes the
/// input as (H + H^dagger)/2 and rejects inputs whose anti-Hermitian residual
/// exceeds 1e-12 relative to the operator scale.
class HermitianOp {
 public:
  HermitianOp(HilbertSpace space, const CMatrix& entries);

  const HilbertSpace& space() const { return space_; }
  const CMatrix& matrix() const { return entries_; }
  Index dim() const { return entries_.rows(); }

  double trace() const { return entries_.trace().real(); }
  Eigen::VectorXd eigenvalues() const;
  double min_eigenvalue() const;

  static HermitianOp identity(const HilbertSpace& space);
  static HermitianOp projector(const PureState& state);

 private:
  HilbertSpace space_;
  CMatrix entries_;
};

/// Subspace of the joint space with an orthonormal basis.
class Subspace {
 public:
  /// `basis` must have orthonormal columns (checked to 1e-10).
  Subspace(HilbertSpace space, CMatrix basis, std::string label = {});

  const HilbertSpace& space() const { return space_; }
  const CMatrix& basis() const { return basis_; }
  const HermitianOp& projector() const { return projector_; }
  const std::string& label() const { return label_; }
  Index dim() const { return basis_.cols(); }

  HermitianOp complement_projector() const;
  /// <v|P|v> for a vector of the joint space.
  double overlap(const CVector& v) const;

 private:
  HilbertSpace space_;
  CMatrix basis_;
  HermitianOp projector_;
  std::string label_;
};

CVector kron(const CVector& a, const CVector& b);
CMatrix kron(const CMatrix& a, const CMatrix& b);
PureState kron(const PureState& a, const PureState& b);
HermitianOp kron(const HermitianOp& a, const HermitianOp& b);

/// Product vector x_0 ⊗ x_1 ⊗ ... in the library's index order.
CVector product_vector(std::span<const CVector> factors);

/// Orthonormal basis for the span of `vectors` by column-pivoted Householder
/// QR. Directions with pivots below tol * (largest pivot) are discarded.
/// Throws if any input vector is zero or has the wrong length.
Subspace projector_from_span(const HilbertSpace& space, std::span<const CVector> vectors,
                             double tol = 1e-9, std::string label = {});

/// Partial transpose on the parties flagged in `mask`.
CMatrix partial_transpose(const CMatrix& m, const HilbertSpace& space,
                          const std::vector<bool>& mask);
HermitianOp partial_transpose(const HermitianOp& rho, const Bipartition& cut);

/// Where the entry (row, col) lands after a partial transpose over `mask`.
std::pair<Index, Index> transposed_position(Index row, Index col, const HilbertSpace& space,
                                            const std::vector<bool>& mask);

/// Contracts P with |x> on every party not listed in `kept`:
/// returns (1 ⊗ <x|) P (1 ⊗ |x>) acting on the kept parties (in their
/// original relative order). `x` lives on the remaining parties, ordered.
HermitianOp project_onto_subsystem(const HermitianOp& p, std::span<const int> kept,
                                   const PureState& x);
/// Keeps the K side of the cut; x lives on K̄.
HermitianOp project_onto_subsystem(const HermitianOp& p, const Bipartition& cut,
                                   const PureState& x);

struct EigenPair {
  double value = 0.0;
  CVector vector;
};

/// Largest eigenvalue and a unit eigenvector. Among numerically degenerate
/// top eigenvectors the one whose first non-negligible component is largest
/// in modulus is chosen, and its phase is fixed so that component is real
/// and positive.
EigenPair top_eigenpair(const CMatrix& h);
EigenPair top_eigenpair(const HermitianOp& h);

/// Reorders tensor factors of each column: party j of the result is party
/// order[j] of the input.
CMatrix permute_parties(const CMatrix& columns, const HilbertSpace& space,
                        std::span<const int> order);

/// Applies a local operator on one party to each column.
CMatrix apply_local(const CMatrix& columns, const HilbertSpace& space, int party,
                    const CMatrix& op);

/// Haar-random unit vector of the given dimension.
template <class Rng>
CVector random_unit_vector(Index dim, Rng& rng);

}  // namespace gesq

#include "gesq/detail/random_impl.hpp"
