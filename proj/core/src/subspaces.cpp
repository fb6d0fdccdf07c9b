#include "gesq/subspaces.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>

namespace gesq {
namespace {

Index ipow(Index base, int exp) {
  Index r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

// Keeps an orthonormal running basis; accepts vectors that enlarge the span.
class SpanTracker {
 public:
  explicit SpanTracker(Index dim) : dim_(dim) {}

  bool try_add(const CVector& v) {
    CVector r = v;
    for (int pass = 0; pass < 2; ++pass) {
      for (const CVector& q : basis_) r -= q.dot(r) * q;
    }
    if (r.norm() <= 1e-9 * std::max(1.0, v.norm())) return false;
    basis_.push_back(r / r.norm());
    return true;
  }
  std::size_t size() const { return basis_.size(); }

 private:
  Index dim_;
  std::vector<CVector> basis_;
};

// Exact null space of an integer matrix via reduced row echelon form.
std::vector<std::vector<Rational>> integer_null_space(std::vector<std::vector<Rational>> rows, Index cols) {
  std::vector<Index> pivot_cols;
  std::size_t r = 0;
  for (Index c = 0; c < cols && r < rows.size(); ++c) {
    std::size_t piv = r;
    while (piv < rows.size() && rows[piv][c] == Rational(0)) ++piv;
    if (piv == rows.size()) continue;
    std::swap(rows[r], rows[piv]);
    const Rational inv = Rational(1) / rows[r][c];
    for (auto& x : rows[r]) x *= inv;
    for (std::size_t o = 0; o < rows.size(); ++o) {
      if (o == r || rows[o][c] == Rational(0)) continue;
      const Rational f = rows[o][c];
      for (Index k = 0; k < cols; ++k) {
        if (rows[r][k] != Rational(0)) rows[o][k] -= f * rows[r][k];
      }
    }
    pivot_cols.push_back(c);
    ++r;
  }
  std::vector<bool> is_pivot(cols, false);
  for (Index c : pivot_cols) is_pivot[c] = true;
  std::vector<std::vector<Rational>> basis;
  for (Index free = 0; free < cols; ++free) {
    if (is_pivot[free]) continue;
    std::vector<Rational> v(cols, Rational(0));
    v[free] = 1;
    for (std::size_t i = 0; i < pivot_cols.size(); ++i) v[pivot_cols[i]] = -rows[i][free];
    basis.push_back(std::move(v));
  }
  return basis;
}

}  // namespace

// ---------------------------------------------------------------------------
// S family

Complex GesParams::a() const { return std::cos(theta / 2.0); }
Complex GesParams::b() const { return std::polar(std::sin(theta / 2.0), xi); }

void GesParams::validate() const {
  require(n_parties >= 2, "GesParams: need N >= 2");
  require(d >= 2, "GesParams: need d >= 2");
  require(theta > 0.0 && theta < std::numbers::pi, "GesParams: theta must lie in (0, pi)");
}

Subspace ces_2xd(int d, double theta, double xi) {
  return ges_2xd_pow(GesParams{2, d, theta, xi});
}

Subspace ges_2xd_pow(const GesParams& params) {
  params.validate();
  const int n = params.n_parties;
  const int d = params.d;
  std::vector<int> dims(n, d);
  dims[0] = 2;
  HilbertSpace space(dims);
  const Index count = ipow(d - 1, n - 1);
  CMatrix basis = CMatrix::Zero(space.total_dim(), count);
  std::vector<int> digits(n);
  for (Index col = 0; col < count; ++col) {
    Index rem = col;
    for (int m = n - 1; m >= 1; --m) {
      digits[m] = static_cast<int>(rem % (d - 1));
      rem /= (d - 1);
    }
    digits[0] = 0;
    basis(space.flat_index(digits), col) += params.a();
    digits[0] = 1;
    for (int m = 1; m < n; ++m) ++digits[m];
    basis(space.flat_index(digits), col) += params.b();
  }
  return Subspace(space, std::move(basis), "S");
}

RationalMatrix s_projector_exact(int n_parties, int d) {
  const Subspace s = ges_2xd_pow(GesParams{n_parties, d});
  const HilbertSpace& space = s.space();
  RationalMatrix p(space.total_dim(), space.total_dim());
  for (Index col = 0; col < s.dim(); ++col) {
    std::vector<Index> support;
    for (Index i = 0; i < space.total_dim(); ++i) {
      if (std::abs(s.basis()(i, col)) > 0.5) support.push_back(i);
    }
    for (Index i : support) {
      for (Index j : support) p(i, j) += Rational(1, 2);
    }
  }
  return p;
}

// ---------------------------------------------------------------------------
// Q1

Q1IndexScheme Q1IndexScheme::make(int n_parties, int d) {
  require(n_parties >= 2 && d >= 2, "Q1: need N >= 2 and d >= 2");
  Index p1 = 0;
  for (int m = 0; m <= n_parties - 2; ++m) p1 += ipow(d, m);
  return {n_parties, d, p1};
}

std::vector<CVector> q1_cyclic_orthonormalize(std::span<const CVector> gammas) {
  require(gammas.size() >= 2, "q1_cyclic_orthonormalize: need at least two vectors");
  const Index len = gammas[0].size();
  for (std::size_t i = 0; i < gammas.size(); ++i) {
    require(gammas[i].size() == len, "q1_cyclic_orthonormalize: length mismatch");
    for (std::size_t j = 0; j <= i; ++j) {
      const Complex g = gammas[j].dot(gammas[i]);
      const double expect = (i == j) ? 1.0 : 0.0;
      require(std::abs(g - expect) <= 1e-10, "q1_cyclic_orthonormalize: input is not orthonormal");
    }
  }
  std::vector<CVector> out;
  CVector prefix = gammas[0];
  for (std::size_t m = 1; m < gammas.size(); ++m) {
    const double md = static_cast<double>(m);
    out.push_back((prefix - md * gammas[m]) / std::sqrt(md * (md + 1.0)));
    prefix += gammas[m];
  }
  return out;
}

SubspaceConstruction q1_construction(int n_parties, int d) {
  const Q1IndexScheme scheme = Q1IndexScheme::make(n_parties, d);
  const HilbertSpace space = HilbertSpace::uniform(n_parties, d);
  const Index rest = ipow(d, n_parties - 1);
  const Index D = space.total_dim();

  // Group the coordinates |i>|k> by the exponent i*p1 + k they carry.
  std::map<Index, std::vector<Index>> groups;
  for (int i = 0; i < d; ++i) {
    for (Index k = 0; k < rest; ++k) groups[i * scheme.p1 + k].push_back(i * rest + k);
  }

  std::vector<CVector> raw;
  std::vector<CVector> ortho;
  for (const auto& [exponent, members] : groups) {
    if (members.size() < 2) continue;
    std::vector<CVector> gammas;
    for (Index flat : members) gammas.push_back(CVector::Unit(D, flat));
    for (std::size_t j = 0; j + 1 < gammas.size(); ++j) raw.push_back(gammas[j] - gammas[j + 1]);
    for (CVector& phi : q1_cyclic_orthonormalize(gammas)) ortho.push_back(std::move(phi));
  }
  const Index expected = ipow(d, n_parties) - (2 * ipow(d, n_parties - 1) - 1);
  if (static_cast<Index>(ortho.size()) != expected) throw std::logic_error("Q1: unexpected dimension");
  CMatrix basis(D, expected);
  for (Index c = 0; c < expected; ++c) basis.col(c) = ortho[c];
  return {std::move(raw), Subspace(space, std::move(basis), "Q1")};
}

Subspace q1_subspace(int n_parties, int d) { return q1_construction(n_parties, d).subspace; }

CVector q1_product_vector(int n_parties, int d, Complex alpha) {
  const Q1IndexScheme scheme = Q1IndexScheme::make(n_parties, d);
  const Index rest = ipow(d, n_parties - 1);
  CVector first(d), second(rest);
  for (int i = 0; i < d; ++i) first(i) = std::pow(alpha, static_cast<double>(i * scheme.p1));
  for (Index k = 0; k < rest; ++k) second(k) = std::pow(alpha, static_cast<double>(k));
  return kron(first, second);
}

// ---------------------------------------------------------------------------
// Q2

std::vector<CVector> q2_listed_vectors(int n_parties, int d) {
  require(n_parties >= 3 && d >= 2, "Q2: need N >= 3 and d >= 2");
  const Index rest = ipow(d, n_parties - 1);
  const Index D = d * rest;
  const Index m_count = ipow(d, n_parties - 1) - ipow(d, n_parties - 2);
  std::vector<CVector> out;
  for (int k = 1; k < d; ++k) {
    for (Index m = 0; m < m_count; ++m) {
      bool fits = true;
      CVector v = CVector::Zero(D);
      for (int f = 2; f <= n_parties; ++f) {
        const Index ket = k * ipow(d, n_parties - f) + m;
        if (ket >= rest) {
          fits = false;
          break;
        }
        v(ket) += 1.0;
      }
      if (!fits) continue;
      v(k * rest + m) -= 1.0;
      out.push_back(std::move(v));
    }
  }
  return out;
}

SubspaceConstruction q2_construction(int n_parties, int d) {
  require(n_parties >= 3 && d >= 2, "Q2: need N >= 3 and d >= 2");
  const HilbertSpace space = HilbertSpace::uniform(n_parties, d);
  const Index rest = ipow(d, n_parties - 1);
  const Index D = space.total_dim();
  const Index expected = ipow(d, n_parties - 2) * (d - 1) * (d - 1);

  // Coefficient matrix of the product family: row = power of α, column = |k>|m>.
  const Index max_exp = (d - 1) * ipow(d, n_parties - 2) + rest;
  std::vector<std::vector<Rational>> coeffs(max_exp, std::vector<Rational>(D, Rational(0)));
  for (Index m = 0; m < rest; ++m) coeffs[m][m] += 1;
  for (int k = 1; k < d; ++k) {
    for (Index m = 0; m < rest; ++m) {
      for (int f = 2; f <= n_parties; ++f) coeffs[k * ipow(d, n_parties - f) + m][k * rest + m] += 1;
    }
  }

  std::vector<CVector> raw = q2_listed_vectors(n_parties, d);
  SpanTracker tracker(D);
  for (const CVector& v : raw) {
    if (!tracker.try_add(v)) throw std::logic_error("Q2: listed vectors are linearly dependent");
  }
  // Complete with exact null-space vectors where the listed ones fall short.
  for (const auto& exact : integer_null_space(std::move(coeffs), D)) {
    if (static_cast<Index>(tracker.size()) == expected) break;
    CVector v(D);
    for (Index i = 0; i < D; ++i) v(i) = to_double(exact[i]);
    if (tracker.try_add(v)) raw.push_back(std::move(v));
  }
  if (static_cast<Index>(tracker.size()) != expected) throw std::logic_error("Q2: unexpected dimension");
  Subspace sub = projector_from_span(space, raw, 1e-9, "Q2");
  if (sub.dim() != expected) throw std::logic_error("Q2: rank mismatch after orthonormalization");
  return {std::move(raw), std::move(sub)};
}

Subspace q2_subspace(int n_parties, int d) { return q2_construction(n_parties, d).subspace; }

CVector q2_product_vector(int n_parties, int d, Complex alpha) {
  require(n_parties >= 3 && d >= 2, "Q2: need N >= 3 and d >= 2");
  const Index rest = ipow(d, n_parties - 1);
  CVector first(d), second(rest);
  first(0) = 1.0;
  for (int k = 1; k < d; ++k) {
    Complex sum = 0.0;
    for (int f = 2; f <= n_parties; ++f) sum += std::pow(alpha, static_cast<double>(k * ipow(d, n_parties - f)));
    first(k) = sum;
  }
  for (Index m = 0; m < rest; ++m) second(m) = std::pow(alpha, static_cast<double>(m));
  return kron(first, second);
}

// ---------------------------------------------------------------------------
// Antisymmetric and W-span

Subspace antisymmetric_subspace(int d, int n_parties) {
  require(n_parties >= 2, "antisymmetric_subspace: need N >= 2");
  require(d >= n_parties, "antisymmetric_subspace: need d >= N");
  const HilbertSpace space = HilbertSpace::uniform(n_parties, d);
  std::vector<CVector> columns;
  std::vector<bool> choose(d, false);
  std::fill(choose.begin(), choose.begin() + n_parties, true);
  double factorial = 1.0;
  for (int i = 2; i <= n_parties; ++i) factorial *= i;
  const double norm = 1.0 / std::sqrt(factorial);
  do {
    std::vector<int> picked;
    for (int i = 0; i < d; ++i) {
      if (choose[i]) picked.push_back(i);
    }
    std::vector<int> perm(n_parties);
    for (int i = 0; i < n_parties; ++i) perm[i] = i;
    CVector v = CVector::Zero(space.total_dim());
    do {
      int inversions = 0;
      for (int i = 0; i < n_parties; ++i) {
        for (int j = i + 1; j < n_parties; ++j) inversions += perm[i] > perm[j];
      }
      std::vector<int> digits(n_parties);
      for (int i = 0; i < n_parties; ++i) digits[i] = picked[perm[i]];
      v(space.flat_index(digits)) += (inversions % 2 ? -norm : norm);
    } while (std::next_permutation(perm.begin(), perm.end()));
    columns.push_back(std::move(v));
  } while (std::prev_permutation(choose.begin(), choose.end()));

  CMatrix basis(space.total_dim(), static_cast<Index>(columns.size()));
  for (Index c = 0; c < basis.cols(); ++c) basis.col(c) = columns[c];
  return Subspace(space, std::move(basis), "ASYM");
}

Subspace w_span_subspace(int n_parties) {
  require(n_parties >= 3, "w_span_subspace: need N >= 3");
  const HilbertSpace space = HilbertSpace::uniform(n_parties, 2);
  const Index D = space.total_dim();
  CMatrix basis = CMatrix::Zero(D, 2);
  const double amp = 1.0 / std::sqrt(static_cast<double>(n_parties));
  for (int p = 0; p < n_parties; ++p) {
    const Index single = space.stride(p);
    basis(single, 0) = amp;
    basis(D - 1 - single, 1) = amp;
  }
  return Subspace(space, std::move(basis), "WSPAN");
}

Subspace construct_subspace(std::string_view label, int n_parties, int d, double theta) {
  if (label == "S") return ges_2xd_pow(GesParams{n_parties, d, theta, 0.0});
  if (label == "Q1") return q1_subspace(n_parties, d);
  if (label == "Q2") return q2_subspace(n_parties, d);
  if (label == "ASYM") return antisymmetric_subspace(d, n_parties);
  if (label == "WSPAN") return w_span_subspace(n_parties);
  throw std::invalid_argument("unknown subspace label '" + std::string(label) + "'");
}

// ---------------------------------------------------------------------------
// Equivalence and certificate checks

EquivalenceReport verify_local_unitary_equivalence(int d) {
  require(d >= 2, "verify_local_unitary_equivalence: need d >= 2");
  const HilbertSpace dbd({d, 2, d});
  std::vector<CVector> vectors;
  for (int i = 0; i + 1 < d; ++i) {
    for (int k = 0; k + 1 < d; ++k) {
      CVector v = CVector::Zero(dbd.total_dim());
      const int plus[] = {i, 1, k + 1};
      const int minus[] = {i + 1, 0, k};
      v(dbd.flat_index(plus)) += 1.0 / std::sqrt(2.0);
      v(dbd.flat_index(minus)) -= 1.0 / std::sqrt(2.0);
      vectors.push_back(std::move(v));
    }
  }
  CMatrix cols(dbd.total_dim(), static_cast<Index>(vectors.size()));
  for (Index c = 0; c < cols.cols(); ++c) cols.col(c) = vectors[c];

  CMatrix flip = CMatrix::Zero(d, d);
  for (int i = 0; i < d; ++i) flip(d - 1 - i, i) = 1.0;
  CMatrix isy(2, 2);
  isy << 0.0, 1.0, -1.0, 0.0;
  cols = apply_local(cols, dbd, 2, flip);
  cols = apply_local(cols, dbd, 1, isy);
  const int swap_ab[] = {1, 0, 2};
  cols = permute_parties(cols, dbd, swap_ab);

  const Subspace target = ges_2xd_pow(GesParams{3, d});
  const CMatrix produced = cols * cols.adjoint();
  EquivalenceReport report;
  report.dim = cols.cols();
  report.projector_distance = (produced - target.projector().matrix()).cwiseAbs().maxCoeff();
  report.equivalent = report.projector_distance <= 1e-9 && report.dim == target.dim();
  return report;
}

PptStateReport ppt_state_outside_s() {
  const Rational a(9, 10), b(14, 25), c(7, 25), x(1, 30), y(1, 14), z(1, 7), alpha(7, 25);
  // beta = sqrt(1 - alpha^2) = 24/25 exactly.
  const Rational beta(24, 25);
  if (alpha * alpha + beta * beta != Rational(1)) throw std::logic_error("ppt_state_outside_s: beta is not rational");

  RationalMatrix rho(18, 18);
  auto pair = [&rho](Index i, Index j, Rational diag_i, Rational diag_j, Rational off) {
    rho(i, i) = diag_i;
    rho(j, j) = diag_j;
    rho(i, j) = off;
    rho(j, i) = off;
  };
  pair(0, 13, a * alpha * alpha, a * beta * beta, a * alpha * beta);
  pair(4, 17, a * beta * beta, a * alpha * alpha, a * alpha * beta);
  pair(1, 14, (b + c) / 2, (b + c) / 2, (b - c) / 2);
  pair(3, 16, (b + c) / 2, (b + c) / 2, (b - c) / 2);
  for (Index i : {2, 6, 11, 15}) rho(i, i) = x;
  for (Index i : {8, 9}) rho(i, i) = y;
  for (Index i : {5, 7, 10, 12}) rho(i, i) = z;

  const Rational norm = 2 * (a + b + c + 2 * x + y + 2 * z);
  for (Index i = 0; i < 18; ++i) {
    for (Index j = 0; j < 18; ++j) rho(i, j) /= norm;
  }

  const HilbertSpace space({2, 3, 3});
  HermitianOp state(space, rho.to_complex());
  std::vector<double> mins;
  for (const Bipartition& cut : Bipartition::all(3)) mins.push_back(partial_transpose(state, cut).min_eigenvalue());
  const Rational overlap = trace_of_product(s_projector_exact(3, 3), rho);
  const Rational rest = Rational(1) - overlap;
  return {rho, std::move(state), std::move(mins), overlap, to_double(overlap), rest, to_double(rest)};
}

}  // namespace gesq
