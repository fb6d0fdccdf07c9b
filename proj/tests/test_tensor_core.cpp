#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "gesq/tensor_core.hpp"
#include "test_util.hpp"

using namespace gesq;
using gesq::testing::random_hermitian;

TEST(HilbertSpace, TotalDimAndRoundTrip) {
  HilbertSpace s({2, 3, 4});
  EXPECT_EQ(s.total_dim(), 24);
  for (Index i = 0; i < s.total_dim(); ++i) {
    const auto digits = s.multi_index(i);
    EXPECT_EQ(s.flat_index(digits), i);
  }
  EXPECT_EQ(s.multi_index(1), (std::vector<int>{0, 0, 1}));
  EXPECT_EQ(s.multi_index(12), (std::vector<int>{1, 0, 0}));
}

TEST(HilbertSpace, RejectsBadDims) {
  EXPECT_THROW(HilbertSpace({}), std::invalid_argument);
  EXPECT_THROW(HilbertSpace({2, 0}), std::invalid_argument);
}

TEST(Bipartition, CanonicalCountAndForm) {
  for (int n = 2; n <= 6; ++n) {
    const auto cuts = Bipartition::all(n);
    EXPECT_EQ(cuts.size(), (std::size_t{1} << (n - 1)) - 1);
    for (const auto& c : cuts) EXPECT_TRUE(c.contains(0));
  }
  Bipartition a({1, 2}, 3), b({0}, 3);
  EXPECT_EQ(a, b);
  EXPECT_THROW(Bipartition({}, 3), std::invalid_argument);
  EXPECT_THROW(Bipartition({0, 1, 2}, 3), std::invalid_argument);
  EXPECT_THROW(Bipartition({5}, 3), std::out_of_range);
}

TEST(Kron, BasisVectors) {
  CVector e0 = CVector::Unit(2, 0), e1 = CVector::Unit(2, 1);
  EXPECT_EQ(kron(e0, e1), CVector::Unit(4, 1));
  EXPECT_TRUE(kron(CMatrix(CMatrix::Identity(2, 2)), CMatrix(CMatrix::Identity(3, 3))).isApprox(CMatrix::Identity(6, 6)));
  CVector plus = (e0 + e1) / std::sqrt(2.0);
  CVector expect = (CVector::Unit(4, 0) + CVector::Unit(4, 2)) / std::sqrt(2.0);
  EXPECT_TRUE(kron(plus, e0).isApprox(expect));
}

TEST(Kron, Bilinear) {
  std::mt19937_64 rng(3);
  CVector a = random_unit_vector(3, rng), b = random_unit_vector(2, rng), c = random_unit_vector(3, rng);
  const Complex s(0.3, -1.2);
  EXPECT_TRUE(kron((a + s * c).eval(), b).isApprox(kron(a, b) + s * kron(c, b)));
}

TEST(PureState, NormalizeAndBasis) {
  const HilbertSpace s({2, 2});
  PureState p(s, CVector::Constant(4, Complex(2.0, 0.0)));
  EXPECT_NEAR(p.normalized().norm(), 1.0, 1e-12);
  const int digits[] = {1, 0};
  EXPECT_EQ(PureState::basis(s, digits).amplitudes(), CVector::Unit(4, 2));
  EXPECT_THROW(PureState(s, CVector::Zero(3)), std::invalid_argument);
}

TEST(HermitianOp, SymmetrizesAndRejects) {
  const HilbertSpace s({2});
  CMatrix m(2, 2);
  m << 1.0, Complex(0, 1), Complex(0, -1), 2.0;
  HermitianOp h(s, m);
  EXPECT_TRUE(h.matrix().isApprox(h.matrix().adjoint()));
  CMatrix bad = m;
  bad(0, 1) = 5.0;
  EXPECT_THROW(HermitianOp(s, bad), std::invalid_argument);
}

TEST(ProjectorFromSpan, DependentInputs) {
  const HilbertSpace s({2, 2});
  CVector v = CVector::Unit(4, 0) + CVector::Unit(4, 3);
  std::vector<CVector> vs{v, 2.0 * v};
  const Subspace sub = projector_from_span(s, vs);
  EXPECT_EQ(sub.dim(), 1);
  std::vector<CVector> zero{CVector::Zero(4)};
  EXPECT_THROW(projector_from_span(s, zero), std::invalid_argument);
  std::vector<CVector> wrong{CVector::Ones(3)};
  EXPECT_THROW(projector_from_span(s, wrong), std::invalid_argument);
}

TEST(ProjectorFromSpan, IdempotentAndReproducesInputs) {
  std::mt19937_64 rng(11);
  const HilbertSpace s({3, 3});
  std::vector<CVector> vs;
  for (int i = 0; i < 4; ++i) vs.push_back(random_unit_vector(9, rng));
  vs.push_back(vs[0] - 0.5 * vs[2]);
  const Subspace sub = projector_from_span(s, vs);
  EXPECT_EQ(sub.dim(), 4);
  const CMatrix& p = sub.projector().matrix();
  EXPECT_LE((p * p - p).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_NEAR(p.trace().real(), 4.0, 1e-10);
  EXPECT_LE((p * sub.complement_projector().matrix()).cwiseAbs().maxCoeff(), 1e-10);
  for (const auto& v : vs) EXPECT_LE((p * v - v).norm(), 1e-9 * v.norm());
}

TEST(PartialTranspose, GhzMinimumEigenvalue) {
  const HilbertSpace s = HilbertSpace::uniform(3, 2);
  HermitianOp rho(s, gesq::testing::projector_of(gesq::testing::ghz(3)));
  EXPECT_NEAR(partial_transpose(rho, Bipartition({0}, 3)).min_eigenvalue(), -0.5, 1e-12);
}

TEST(PartialTranspose, ProductStaysPositive) {
  std::mt19937_64 rng(5);
  const HilbertSpace s({2, 3});
  const CMatrix a = gesq::testing::random_density(2, rng), b = gesq::testing::random_density(3, rng);
  HermitianOp rho(s, kron(a, b));
  const HermitianOp pt = partial_transpose(rho, Bipartition({0}, 2));
  EXPECT_TRUE(pt.matrix().isApprox(kron(CMatrix(a.transpose()), b)));
  EXPECT_GE(pt.min_eigenvalue(), -1e-12);
}

TEST(PartialTranspose, InvolutionTraceAndComplement) {
  std::mt19937_64 rng(7);
  for (const auto& dims : std::vector<std::vector<int>>{{2, 2}, {2, 3, 2}, {2, 2, 2, 2}, {4, 4, 4}, {2, 2, 2, 2, 2, 2}}) {
    const HilbertSpace s(dims);
    const CMatrix m = random_hermitian(s.total_dim(), rng);
    for (const auto& cut : Bipartition::all(s.parties())) {
      const auto mask = cut.mask();
      std::vector<bool> other(mask.size());
      for (std::size_t i = 0; i < mask.size(); ++i) other[i] = !mask[i];
      const CMatrix once = partial_transpose(m, s, mask);
      EXPECT_LE((partial_transpose(once, s, mask) - m).cwiseAbs().maxCoeff(), 1e-14);
      EXPECT_NEAR(std::abs(once.trace() - m.trace()), 0.0, 1e-12);
      EXPECT_LE((partial_transpose(once, s, other) - m.transpose()).cwiseAbs().maxCoeff(), 1e-14);
    }
  }
}

TEST(PartialTranspose, TransposedPositionMatches) {
  const HilbertSpace s({2, 3});
  const std::vector<bool> mask{true, false};
  CMatrix m = CMatrix::Zero(6, 6);
  m(1, 5) = 1.0;
  const CMatrix pt = partial_transpose(m, s, mask);
  const auto [r, c] = transposed_position(1, 5, s, mask);
  EXPECT_EQ(pt(r, c), Complex(1.0));
  EXPECT_THROW(partial_transpose(m, s, std::vector<bool>{true}), std::invalid_argument);
}

TEST(ProjectOntoSubsystem, IdentityAndReadout) {
  const HilbertSpace s({2, 2});
  const Bipartition cut({0}, 2);
  PureState x(HilbertSpace({2}), CVector::Unit(2, 0));
  EXPECT_TRUE(project_onto_subsystem(HermitianOp::identity(s), cut, x).matrix().isApprox(CMatrix::Identity(2, 2)));
  std::vector<CVector> span{CVector::Unit(4, 0), CVector::Unit(4, 3)};
  const Subspace sub = projector_from_span(s, span);
  CMatrix expect = CMatrix::Zero(2, 2);
  expect(0, 0) = 1.0;
  EXPECT_TRUE(project_onto_subsystem(sub.projector(), cut, x).matrix().isApprox(expect));
  PureState bad(HilbertSpace({3}), CVector::Unit(3, 0));
  EXPECT_THROW(project_onto_subsystem(sub.projector(), cut, bad), std::invalid_argument);
}

TEST(ProjectOntoSubsystem, SesquilinearAndPsd) {
  std::mt19937_64 rng(13);
  const HilbertSpace s({2, 3, 2});
  const CMatrix a = gesq::testing::random_density(12, rng);
  HermitianOp p(s, a);
  const int kept[] = {1};
  CVector x = random_unit_vector(4, rng);
  const Complex alpha(0.7, -0.4);
  const CMatrix base = project_onto_subsystem(p, kept, PureState(HilbertSpace({2, 2}), x)).matrix();
  const CMatrix scaled = project_onto_subsystem(p, kept, PureState(HilbertSpace({2, 2}), alpha * x)).matrix();
  EXPECT_LE((scaled - std::norm(alpha) * base).cwiseAbs().maxCoeff(), 1e-12);
  HermitianOp h(HilbertSpace({3}), base);
  EXPECT_GE(h.min_eigenvalue(), -1e-12);
  EXPECT_LE(h.trace(), p.trace() + 1e-12);
}

TEST(TopEigenpair, SimpleCases) {
  const EigenPair id = top_eigenpair(CMatrix(CMatrix::Identity(3, 3)));
  EXPECT_NEAR(id.value, 1.0, 1e-12);
  EXPECT_NEAR(id.vector.norm(), 1.0, 1e-12);
  CMatrix d = CMatrix::Zero(3, 3);
  d.diagonal() << 0.2, 0.7, 0.1;
  const EigenPair e = top_eigenpair(d);
  EXPECT_NEAR(e.value, 0.7, 1e-12);
  EXPECT_NEAR(std::abs(e.vector(1)), 1.0, 1e-12);
  EXPECT_NEAR(e.vector(1).imag(), 0.0, 1e-12);
  EXPECT_GT(e.vector(1).real(), 0.0);
}

TEST(TopEigenpair, AgreesWithDenseSolver) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 5; ++trial) {
    const CMatrix h = random_hermitian(50, rng);
    const EigenPair e = top_eigenpair(h);
    Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
    EXPECT_NEAR(e.value, es.eigenvalues().maxCoeff(), 1e-10);
    EXPECT_LE((h * e.vector - e.value * e.vector).norm(), 1e-10);
  }
}

TEST(PermuteParties, RoundTrip) {
  std::mt19937_64 rng(19);
  const HilbertSpace s({2, 3, 4});
  const CVector a = random_unit_vector(2, rng), b = random_unit_vector(3, rng), c = random_unit_vector(4, rng);
  const CVector x = kron(kron(a, b), c);
  const int order[] = {2, 0, 1};
  const CMatrix y = permute_parties(x, s, order);
  EXPECT_TRUE(y.col(0).isApprox(kron(kron(c, a), b)));
}

TEST(ApplyLocal, MatchesKron) {
  std::mt19937_64 rng(23);
  const HilbertSpace s({2, 3});
  const CVector x = random_unit_vector(6, rng);
  const CMatrix u = random_hermitian(3, rng);
  EXPECT_TRUE(apply_local(x, s, 1, u).col(0).isApprox(kron(CMatrix(CMatrix::Identity(2, 2)), u) * x));
}
