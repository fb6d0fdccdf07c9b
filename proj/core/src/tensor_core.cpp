#include "gesq/tensor_core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace gesq {

// ---------------------------------------------------------------------------
// HilbertSpace

HilbertSpace::HilbertSpace(std::vector<int> dims) : dims_(std::move(dims)) {
  if (dims_.empty()) throw std::invalid_argument("HilbertSpace: need at least one party");
  strides_.assign(dims_.size(), 1);
  for (int i = static_cast<int>(dims_.size()) - 1; i >= 0; --i) {
    if (dims_[i] < 1) throw std::invalid_argument("HilbertSpace: local dimensions must be positive");
    strides_[i] = total_;
    total_ *= dims_[i];
  }
}

HilbertSpace HilbertSpace::uniform(int parties, int local_dim) {
  if (parties < 1) throw std::invalid_argument("HilbertSpace: need at least one party");
  return HilbertSpace(std::vector<int>(parties, local_dim));
}

std::vector<int> HilbertSpace::multi_index(Index flat) const {
  if (flat < 0 || flat >= total_) throw std::out_of_range("HilbertSpace: flat index out of range");
  std::vector<int> digits(dims_.size());
  for (std::size_t i = 0; i < dims_.size(); ++i) {
    digits[i] = static_cast<int>(flat / strides_[i]);
    flat %= strides_[i];
  }
  return digits;
}

Index HilbertSpace::flat_index(std::span<const int> digits) const {
  if (digits.size() != dims_.size()) throw std::invalid_argument("HilbertSpace: wrong number of digits");
  Index flat = 0;
  for (std::size_t i = 0; i < dims_.size(); ++i) {
    if (digits[i] < 0 || digits[i] >= dims_[i]) throw std::out_of_range("HilbertSpace: digit out of range");
    flat += digits[i] * strides_[i];
  }
  return flat;
}

HilbertSpace HilbertSpace::restricted(std::span<const int> parties) const {
  std::vector<int> dims;
  dims.reserve(parties.size());
  for (int p : parties) dims.push_back(dims_.at(p));
  return HilbertSpace(std::move(dims));
}

// ---------------------------------------------------------------------------
// Bipartition

Bipartition::Bipartition(std::vector<int> parties, int n_parties) : n_parties_(n_parties) {
  if (n_parties < 2) throw std::invalid_argument("Bipartition: need at least two parties");
  std::sort(parties.begin(), parties.end());
  parties.erase(std::unique(parties.begin(), parties.end()), parties.end());
  for (int p : parties) {
    if (p < 0 || p >= n_parties) throw std::out_of_range("Bipartition: party index out of range");
  }
  if (parties.empty() || static_cast<int>(parties.size()) == n_parties) {
    throw std::invalid_argument("Bipartition: K must be a nonempty proper subset");
  }
  side_ = std::move(parties);
  if (side_.front() != 0) side_ = complement();
}

std::vector<int> Bipartition::complement() const {
  std::vector<int> rest;
  for (int p = 0; p < n_parties_; ++p) {
    if (!contains(p)) rest.push_back(p);
  }
  return rest;
}

bool Bipartition::contains(int party) const {
  return std::binary_search(side_.begin(), side_.end(), party);
}

std::vector<bool> Bipartition::mask() const {
  std::vector<bool> m(n_parties_, false);
  for (int p : side_) m[p] = true;
  return m;
}

std::string Bipartition::to_string() const {
  std::ostringstream os;
  auto put = [&os](const std::vector<int>& v) {
    os << '{';
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
    os << '}';
  };
  put(side_);
  os << '|';
  put(complement());
  return os.str();
}

std::vector<Bipartition> Bipartition::all(int n_parties) {
  if (n_parties < 2 || n_parties > 20) throw std::invalid_argument("Bipartition::all: need 2 <= N <= 20");
  std::vector<Bipartition> cuts;
  const unsigned full = (1u << n_parties) - 1u;
  // Masks that contain party 0 and are not the full set.
  for (unsigned mask = 1; mask < full; mask += 2) {
    std::vector<int> side;
    for (int p = 0; p < n_parties; ++p) {
      if (mask & (1u << p)) side.push_back(p);
    }
    cuts.emplace_back(std::move(side), n_parties);
  }
  return cuts;
}

// ---------------------------------------------------------------------------
// PureState / HermitianOp / Subspace

PureState::PureState(HilbertSpace space, CVector amplitudes)
    : space_(std::move(space)), amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.size() != space_.total_dim()) {
    throw std::invalid_argument("PureState: amplitude count does not match the space");
  }
}

PureState PureState::normalized() const {
  const double n = norm();
  if (n == 0.0) throw std::invalid_argument("PureState: cannot normalize the zero vector");
  return PureState(space_, amplitudes_ / n);
}

PureState PureState::basis(const HilbertSpace& space, std::span<const int> digits) {
  CVector v = CVector::Zero(space.total_dim());
  v(space.flat_index(digits)) = 1.0;
  return PureState(space, std::move(v));
}

HermitianOp::HermitianOp(HilbertSpace space, const CMatrix& entries) : space_(std::move(space)) {
  if (entries.rows() != entries.cols() || entries.rows() != space_.total_dim()) {
    throw std::invalid_argument("HermitianOp: matrix shape does not match the space");
  }
  const double scale = std::max(1.0, entries.cwiseAbs().maxCoeff());
  const double residual = (entries - entries.adjoint()).cwiseAbs().maxCoeff();
  if (residual > 1e-12 * scale) {
    throw std::invalid_argument("HermitianOp: matrix is not Hermitian (residual " +
                                std::to_string(residual) + ")");
  }
  entries_ = 0.5 * (entries + entries.adjoint());
}

Eigen::VectorXd HermitianOp::eigenvalues() const {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(entries_, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

double HermitianOp::min_eigenvalue() const { return eigenvalues().minCoeff(); }

HermitianOp HermitianOp::identity(const HilbertSpace& space) {
  return HermitianOp(space, CMatrix::Identity(space.total_dim(), space.total_dim()));
}

HermitianOp HermitianOp::projector(const PureState& state) {
  const CVector& v = state.amplitudes();
  return HermitianOp(state.space(), v * v.adjoint());
}

Subspace::Subspace(HilbertSpace space, CMatrix basis, std::string label)
    : space_(std::move(space)),
      basis_(std::move(basis)),
      projector_(space_, basis_ * basis_.adjoint()),
      label_(std::move(label)) {
  if (basis_.rows() != space_.total_dim()) throw std::invalid_argument("Subspace: basis rows do not match the space");
  if (basis_.cols() == 0) throw std::invalid_argument("Subspace: empty basis");
  const CMatrix gram = basis_.adjoint() * basis_;
  const double err = (gram - CMatrix::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
  if (err > 1e-10) throw std::invalid_argument("Subspace: basis columns are not orthonormal");
}

HermitianOp Subspace::complement_projector() const {
  const Index n = space_.total_dim();
  return HermitianOp(space_, CMatrix::Identity(n, n) - projector_.matrix());
}

double Subspace::overlap(const CVector& v) const { return (basis_.adjoint() * v).squaredNorm(); }

// ---------------------------------------------------------------------------
// Products

CVector kron(const CVector& a, const CVector& b) {
  CVector out(a.size() * b.size());
  for (Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

namespace {
HilbertSpace joined(const HilbertSpace& a, const HilbertSpace& b) {
  std::vector<int> dims = a.dims();
  dims.insert(dims.end(), b.dims().begin(), b.dims().end());
  return HilbertSpace(std::move(dims));
}
}  // namespace

PureState kron(const PureState& a, const PureState& b) {
  return PureState(joined(a.space(), b.space()), kron(a.amplitudes(), b.amplitudes()));
}

HermitianOp kron(const HermitianOp& a, const HermitianOp& b) {
  return HermitianOp(joined(a.space(), b.space()), kron(a.matrix(), b.matrix()));
}

CVector product_vector(std::span<const CVector> factors) {
  if (factors.empty()) throw std::invalid_argument("product_vector: no factors");
  CVector out = factors[0];
  for (std::size_t i = 1; i < factors.size(); ++i) out = kron(out, factors[i]);
  return out;
}

// ---------------------------------------------------------------------------
// Span / projectors

Subspace projector_from_span(const HilbertSpace& space, std::span<const CVector> vectors, double tol,
                             std::string label) {
  if (vectors.empty()) throw std::invalid_argument("projector_from_span: no vectors");
  const Index n = space.total_dim();
  CMatrix stacked(n, static_cast<Index>(vectors.size()));
  for (std::size_t k = 0; k < vectors.size(); ++k) {
    if (vectors[k].size() != n) throw std::invalid_argument("projector_from_span: vector length mismatch");
    if (vectors[k].norm() == 0.0) {
      throw std::invalid_argument("projector_from_span: zero vector at position " + std::to_string(k));
    }
    stacked.col(static_cast<Index>(k)) = vectors[k];
  }
  Eigen::ColPivHouseholderQR<CMatrix> qr(stacked);
  qr.setThreshold(tol);
  const Index rank = qr.rank();
  if (rank == 0) throw std::invalid_argument("projector_from_span: numerical rank is zero");
  CMatrix q = qr.householderQ() * CMatrix::Identity(n, rank);
  return Subspace(space, std::move(q), std::move(label));
}

// ---------------------------------------------------------------------------
// Partial transpose

std::pair<Index, Index> transposed_position(Index row, Index col, const HilbertSpace& space,
                                            const std::vector<bool>& mask) {
  Index r = row;
  Index c = col;
  for (int p = 0; p < space.parties(); ++p) {
    if (!mask[p]) continue;
    const Index s = space.stride(p);
    const Index d = space.local_dim(p);
    const Index rd = (row / s) % d;
    const Index cd = (col / s) % d;
    r += (cd - rd) * s;
    c += (rd - cd) * s;
  }
  return {r, c};
}

CMatrix partial_transpose(const CMatrix& m, const HilbertSpace& space, const std::vector<bool>& mask) {
  const Index n = space.total_dim();
  if (m.rows() != n || m.cols() != n) throw std::invalid_argument("partial_transpose: shape mismatch");
  if (static_cast<int>(mask.size()) != space.parties()) {
    throw std::invalid_argument("partial_transpose: mask size does not match the number of parties");
  }
  CMatrix out(n, n);
  for (Index col = 0; col < n; ++col) {
    for (Index row = 0; row < n; ++row) {
      const auto [r, c] = transposed_position(row, col, space, mask);
      out(r, c) = m(row, col);
    }
  }
  return out;
}

HermitianOp partial_transpose(const HermitianOp& rho, const Bipartition& cut) {
  if (cut.n_parties() != rho.space().parties()) {
    throw std::invalid_argument("partial_transpose: cut does not match the number of parties");
  }
  return HermitianOp(rho.space(), partial_transpose(rho.matrix(), rho.space(), cut.mask()));
}

// ---------------------------------------------------------------------------
// Contractions

HermitianOp project_onto_subsystem(const HermitianOp& p, std::span<const int> kept, const PureState& x) {
  const HilbertSpace& space = p.space();
  std::vector<bool> is_kept(space.parties(), false);
  for (int k : kept) {
    if (k < 0 || k >= space.parties()) throw std::out_of_range("project_onto_subsystem: party out of range");
    is_kept[k] = true;
  }
  std::vector<int> kept_sorted, rest;
  for (int q = 0; q < space.parties(); ++q) (is_kept[q] ? kept_sorted : rest).push_back(q);
  if (kept_sorted.empty() || rest.empty()) {
    throw std::invalid_argument("project_onto_subsystem: kept parties must be a nonempty proper subset");
  }
  const HilbertSpace kept_space = space.restricted(kept_sorted);
  const HilbertSpace rest_space = space.restricted(rest);
  if (!(x.space() == rest_space)) throw std::invalid_argument("project_onto_subsystem: x lives on the wrong space");

  // Embedding X with columns |a>_kept ⊗ |x>_rest.
  CMatrix embed = CMatrix::Zero(space.total_dim(), kept_space.total_dim());
  std::vector<int> digits(space.parties());
  for (Index flat = 0; flat < space.total_dim(); ++flat) {
    Index rem = flat;
    for (int q = 0; q < space.parties(); ++q) {
      digits[q] = static_cast<int>(rem / space.stride(q));
      rem %= space.stride(q);
    }
    Index a = 0, u = 0;
    for (std::size_t i = 0; i < kept_sorted.size(); ++i) a += digits[kept_sorted[i]] * kept_space.stride(static_cast<int>(i));
    for (std::size_t i = 0; i < rest.size(); ++i) u += digits[rest[i]] * rest_space.stride(static_cast<int>(i));
    embed(flat, a) = x.amplitudes()(u);
  }
  return HermitianOp(kept_space, embed.adjoint() * p.matrix() * embed);
}

HermitianOp project_onto_subsystem(const HermitianOp& p, const Bipartition& cut, const PureState& x) {
  return project_onto_subsystem(p, std::span<const int>(cut.side()), x);
}

// ---------------------------------------------------------------------------
// Eigenproblems

EigenPair top_eigenpair(const CMatrix& h) {
  if (h.rows() != h.cols() || h.rows() == 0) throw std::invalid_argument("top_eigenpair: need a nonempty square matrix");
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
  if (es.info() != Eigen::Success) throw std::runtime_error("top_eigenpair: eigensolver failed");
  const Index n = h.rows();
  const double top = es.eigenvalues()(n - 1);
  const double gate = 1e-10 * std::max(1.0, std::abs(top));
  Index first = n - 1;
  while (first > 0 && es.eigenvalues()(first - 1) >= top - gate) --first;
  const CMatrix space = es.eigenvectors().middleCols(first, n - first);

  CVector v;
  if (space.cols() == 1) {
    v = space.col(0);
  } else {
    // Project the first coordinate direction that the top eigenspace reaches.
    Index lead = 0;
    while (lead < n && space.row(lead).norm() < 1e-8) ++lead;
    v = space * space.row(lead).adjoint();
    v.normalize();
  }
  Index lead = 0;
  while (lead < n - 1 && std::abs(v(lead)) < 1e-8) ++lead;
  const Complex phase = v(lead) / std::abs(v(lead));
  v /= phase;
  return {top, v};
}

EigenPair top_eigenpair(const HermitianOp& h) { return top_eigenpair(h.matrix()); }

// ---------------------------------------------------------------------------
// Tensor-factor manipulations

CMatrix permute_parties(const CMatrix& columns, const HilbertSpace& space, std::span<const int> order) {
  if (static_cast<int>(order.size()) != space.parties()) throw std::invalid_argument("permute_parties: bad order");
  std::vector<int> check(order.begin(), order.end());
  std::sort(check.begin(), check.end());
  for (int i = 0; i < space.parties(); ++i) {
    if (check[i] != i) throw std::invalid_argument("permute_parties: order is not a permutation");
  }
  if (columns.rows() != space.total_dim()) throw std::invalid_argument("permute_parties: row count mismatch");
  const HilbertSpace target = space.restricted(order);
  CMatrix out(columns.rows(), columns.cols());
  std::vector<int> digits(space.parties()), moved(space.parties());
  for (Index flat = 0; flat < space.total_dim(); ++flat) {
    Index rem = flat;
    for (int q = 0; q < space.parties(); ++q) {
      digits[q] = static_cast<int>(rem / space.stride(q));
      rem %= space.stride(q);
    }
    for (int j = 0; j < space.parties(); ++j) moved[j] = digits[order[j]];
    out.row(target.flat_index(moved)) = columns.row(flat);
  }
  return out;
}

CMatrix apply_local(const CMatrix& columns, const HilbertSpace& space, int party, const CMatrix& op) {
  const Index d = space.local_dim(party);
  if (op.rows() != d || op.cols() != d) throw std::invalid_argument("apply_local: operator has the wrong size");
  if (columns.rows() != space.total_dim()) throw std::invalid_argument("apply_local: row count mismatch");
  const Index s = space.stride(party);
  CMatrix out = CMatrix::Zero(columns.rows(), columns.cols());
  for (Index flat = 0; flat < space.total_dim(); ++flat) {
    const Index digit = (flat / s) % d;
    const Index base = flat - digit * s;
    for (Index a = 0; a < d; ++a) {
      if (op(a, digit) != Complex(0.0)) out.row(base + a * s) += op(a, digit) * columns.row(flat);
    }
  }
  return out;
}

}  // namespace gesq
