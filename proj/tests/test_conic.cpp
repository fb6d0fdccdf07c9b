#include <gtest/gtest.h>

#include <random>

#include "gesq/conic_program.hpp"
#include "gesq/sdp.hpp"
#include "test_util.hpp"

using namespace gesq;
using gesq::testing::random_hermitian;

namespace {

CMatrix random_unitary(Index n, std::mt19937_64& rng) {
  Eigen::HouseholderQR<CMatrix> qr(random_hermitian(n, rng) + Complex(0, 1) * random_hermitian(n, rng));
  return qr.householderQ() * CMatrix::Identity(n, n);
}

ConicProgram trace_one_program(const CMatrix& c, Sense sense, const HilbertSpace* space = nullptr) {
  const Index n = c.rows();
  ConicProgram p;
  const VarRef x = p.add_hermitian(n, "X");
  AffineExpr e(n);
  e.add(x);
  p.add_psd(std::move(e), "X>=0");
  if (space) {
    for (const auto& cut : Bipartition::all(space->parties())) {
      AffineExpr pt(n);
      pt.add_partial_transpose(x, *space, cut.mask());
      p.add_psd(std::move(pt), "pt");
    }
  }
  p.add_equality({{x, CMatrix::Identity(n, n)}}, 1.0, "tr");
  p.set_objective(sense, {{x, c}});
  return p;
}

}  // namespace

TEST(ConicProgram, MinimumEigenvalueComplex) {
  std::mt19937_64 rng(43);
  for (Index n : {2, 4, 6, 8}) {
    const CMatrix c = random_hermitian(n, rng);
    const ConicProgram p = trace_one_program(c, Sense::kMinimize);
    EXPECT_FALSE(p.all_data_real());
    const SdpSolution s = solve(p);
    ASSERT_TRUE(s.usable());
    Eigen::SelfAdjointEigenSolver<CMatrix> es(c, Eigen::EigenvaluesOnly);
    EXPECT_NEAR(s.objective, es.eigenvalues().minCoeff(), 1e-7);
  }
}

TEST(ConicProgram, MaximumEigenvalueReal) {
  std::mt19937_64 rng(47);
  const CMatrix c = random_hermitian(5, rng).real().cast<Complex>();
  const ConicProgram p = trace_one_program(c, Sense::kMaximize);
  EXPECT_TRUE(p.all_data_real());
  EXPECT_TRUE(compile(p).real_field);
  const SdpSolution s = solve(p);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(c, Eigen::EigenvaluesOnly);
  EXPECT_NEAR(s.objective, es.eigenvalues().maxCoeff(), 1e-7);
}

TEST(ConicProgram, BoxConstraint) {
  std::mt19937_64 rng(53);
  const CMatrix c = random_hermitian(6, rng);
  ConicProgram p;
  const VarRef x = p.add_hermitian(6, "X");
  p.add_box(x, "box");
  p.set_objective(Sense::kMinimize, {{x, c}});
  const SdpSolution s = solve(p);
  ASSERT_TRUE(s.usable());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(c, Eigen::EigenvaluesOnly);
  EXPECT_NEAR(s.objective, es.eigenvalues().cwiseMin(0.0).sum(), 1e-7);
}

// Local unitaries map PPT states to PPT states, so the optimum of a complex
// instance equals that of the real instance it is conjugate to.
TEST(ConicProgram, ComplexEmbeddingMatchesRealInstance) {
  std::mt19937_64 rng(59);
  for (const auto& dims : std::vector<std::vector<int>>{{2, 2}, {2, 3}, {2, 2, 2}}) {
    const HilbertSpace space(dims);
    const Index n = space.total_dim();
    const CMatrix c = random_hermitian(n, rng).real().cast<Complex>();
    CMatrix u = CMatrix::Ones(1, 1);
    for (int d : dims) u = kron(u, random_unitary(d, rng));
    const CMatrix rotated = u * c * u.adjoint();
    const SdpSolution real = solve(trace_one_program(c, Sense::kMinimize, &space));
    const ConicProgram cp = trace_one_program(rotated, Sense::kMinimize, &space);
    ASSERT_FALSE(cp.all_data_real());
    const SdpSolution cplx = solve(cp);
    ASSERT_TRUE(real.usable() && cplx.usable());
    EXPECT_NEAR(real.objective, cplx.objective, 1e-7);
  }
}

TEST(ConicProgram, InconsistentEqualities) {
  ConicProgram p;
  const VarRef x = p.add_hermitian(2, "X");
  AffineExpr e(2);
  e.add(x);
  p.add_psd(std::move(e), "X>=0");
  p.add_equality({{x, CMatrix::Identity(2, 2)}}, 1.0, "a");
  p.add_equality({{x, CMatrix::Identity(2, 2)}}, 2.0, "b");
  p.set_objective(Sense::kMinimize, {{x, CMatrix::Identity(2, 2)}});
  EXPECT_TRUE(compile(p).infeasible_equalities);
  const SdpSolution s = solve(p);
  EXPECT_EQ(s.status, SolveStatus::kInfeasible);
  EXPECT_FALSE(s.usable());
}

TEST(ConicProgram, InfeasibleConeIsNotUsable) {
  ConicProgram p;
  const VarRef x = p.add_hermitian(2, "X");
  AffineExpr e(2);
  e.add(x);
  p.add_psd(std::move(e), "X>=0");
  p.add_equality({{x, CMatrix::Identity(2, 2)}}, -1.0, "tr");
  p.set_objective(Sense::kMinimize, {{x, CMatrix::Identity(2, 2)}});
  EXPECT_FALSE(solve(p).usable());
}

TEST(ConicProgram, RejectsBadReferences) {
  ConicProgram p;
  const VarRef x = p.add_hermitian(2, "X");
  AffineExpr e(1);
  e.add(x);
  EXPECT_THROW(p.add_psd(std::move(e), "bad"), std::invalid_argument);
  EXPECT_THROW(p.add_box(VarRef{7}, "bad"), std::out_of_range);
  const VarRef r = p.add_rectangular(2, 2, "R");
  AffineExpr f(4);
  f.add(r);
  EXPECT_THROW(p.add_psd(std::move(f), "bad"), std::invalid_argument);
}

TEST(ConicProgram, AuditDetectsViolation) {
  const ConicProgram p = trace_one_program(CMatrix::Identity(2, 2), Sense::kMinimize);
  CMatrix bad = CMatrix::Zero(2, 2);
  bad(0, 0) = 1.5;
  bad(1, 1) = -0.5;
  const FeasibilityAudit a = audit_point(p, {bad}, 1e-7);
  EXPECT_FALSE(a.passed);
  EXPECT_NEAR(a.min_psd_eigenvalue, -0.5, 1e-12);
  const FeasibilityAudit ok = audit_point(p, {CMatrix(0.5 * CMatrix::Identity(2, 2))}, 1e-7);
  EXPECT_TRUE(ok.passed);
}

TEST(ConicProgram, JsonDump) {
  std::mt19937_64 rng(61);
  const CompiledProgram c = compile(trace_one_program(random_hermitian(3, rng), Sense::kMinimize));
  const nlohmann::json j = lmi_to_json(c);
  EXPECT_EQ(j.at("format"), "gesq.lmi/1");
  EXPECT_EQ(j.at("m").get<int>(), c.lmi.m);
  EXPECT_EQ(j.at("blocks").size(), c.lmi.blocks.size());
  for (const auto& b : j.at("blocks")) {
    for (const auto& e : b.at("f")) EXPECT_LE(e[1].get<int>(), e[2].get<int>());
  }
}
