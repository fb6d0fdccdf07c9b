#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "gesq/noise.hpp"
#include "gesq/sdp.hpp"
#include "gesq/subspaces.hpp"
#include "gesq/variational.hpp"
#include "test_util.hpp"

using namespace gesq;

namespace {

HermitianOp diag_state(const HilbertSpace& s, std::vector<double> d) {
  CMatrix m = CMatrix::Zero(s.total_dim(), s.total_dim());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return HermitianOp(s, m);
}

SeesawConfig quick() {
  SeesawConfig c;
  c.restarts = 20;
  return c;
}

}  // namespace

TEST(SubspaceBounds, GesGm) {
  const BoundResult d3 = gm_lower_bound(ges_2xd_pow(GesParams{3, 3}));
  EXPECT_NEAR(d3.value, 0.41416, 1e-3);
  EXPECT_LT(d3.value, 3.0 / 7.0 - 5e-3);
  EXPECT_TRUE(d3.solution.usable());
  EXPECT_NEAR(gm_lower_bound(ges_2xd_pow(GesParams{3, 4})).value, 0.26543, 1e-3);
}

TEST(SubspaceBounds, PptStateIsFeasibleWithLowerObjective) {
  const PptStateReport c = ppt_state_outside_s();
  const Subspace s = ges_2xd_pow(GesParams{3, 3});
  const ConicProgram p = ppt_relaxation_program(s, Bipartition::all(3));
  const FeasibilityAudit a = audit_point(p, {c.state.matrix()}, 1e-10);
  EXPECT_TRUE(a.passed);
  const double objective = p.evaluate(p.objective(), {c.state.matrix()});
  EXPECT_NEAR(objective, 239371.0 / 568000.0, 1e-12);
  EXPECT_LE(gm_lower_bound(s).value, objective + 1e-7);
}

TEST(SubspaceBounds, FullSpaceGivesZero) {
  const HilbertSpace space({2, 2});
  std::vector<CVector> all;
  for (int i = 0; i < 4; ++i) all.push_back(CVector::Unit(4, i));
  const Subspace full = projector_from_span(space, all);
  EXPECT_NEAR(gm_lower_bound(full).value, 0.0, 1e-7);
  EXPECT_NEAR(ggm_lower_bound(full).value, 0.0, 1e-7);
}

TEST(SubspaceBounds, Ggm) {
  const GgmBound s = ggm_lower_bound(ges_2xd_pow(GesParams{3, 3}));
  EXPECT_NEAR(s.value, 0.25, 1e-4);
  EXPECT_EQ(s.per_cut.size(), 3u);
  EXPECT_NEAR(ggm_lower_bound(q1_subspace(3, 3)).value, 0.025078, 5e-4);
  EXPECT_NEAR(ggm_lower_bound(q2_subspace(3, 3)).value, 4.8023e-3, 1e-4);
}

TEST(SubspaceBounds, ComplexPhaseDoesNotChangeBounds) {
  GesParams p{3, 3};
  p.xi = 0.7;
  const Subspace s = ges_2xd_pow(p);
  EXPECT_NEAR(gm_lower_bound(s).value, gm_lower_bound(ges_2xd_pow(GesParams{3, 3})).value, 1e-6);
}

TEST(SubspaceBounds, SandwichAndOrdering) {
  for (const Subspace& s : {ges_2xd_pow(GesParams{3, 3}), q1_subspace(3, 3), q2_subspace(3, 2), q2_subspace(4, 2),
                            w_span_subspace(3), antisymmetric_subspace(3, 3), antisymmetric_subspace(4, 3)}) {
    const double gm = gm_lower_bound(s).value;
    const double ggm = ggm_lower_bound(s).value;
    EXPECT_LE(gm, seesaw_gm(s, quick()).entanglement + 1e-6) << s.label();
    EXPECT_LE(ggm, ggm_via_cuts(s, quick()).value + 1e-6) << s.label();
    EXPECT_LE(ggm, gm + 1e-7) << s.label();
  }
}

TEST(PptMixture, NormalizedProjector) {
  const HermitianOp rho = make_noisy_state(ges_2xd_pow(GesParams{3, 3}), 0.0);
  EXPECT_NEAR(ppt_mixture_monotone(rho, false).value, 0.3008, 2e-3);
  EXPECT_NEAR(ppt_mixture_monotone(rho, true).value, 0.2253, 2e-3);
}

TEST(PptMixture, ProductStateUndetected) {
  const HilbertSpace s({2, 2, 2});
  const HermitianOp rho = diag_state(s, {1.0});
  EXPECT_NEAR(ppt_mixture_monotone(rho, false).value, 0.0, 1e-7);
  EXPECT_NEAR(ppt_mixture_monotone(rho, true).value, 0.0, 1e-7);
  CMatrix bad = CMatrix::Identity(8, 8);
  EXPECT_THROW(ppt_mixture_monotone(HermitianOp(s, bad), false), std::invalid_argument);
}

TEST(Fidelity, TrivialCases) {
  const HilbertSpace q({2});
  const HermitianOp zero = diag_state(q, {1.0, 0.0});
  const HermitianOp one = diag_state(q, {0.0, 1.0});
  const HermitianOp mixed = diag_state(q, {0.5, 0.5});
  EXPECT_NEAR(fidelity_sdp(zero, zero).value, 1.0, 1e-7);
  EXPECT_NEAR(fidelity_sdp(zero, one).value, 0.0, 1e-7);
  EXPECT_NEAR(fidelity_sdp(zero, mixed).value, 1.0 / std::sqrt(2.0), 1e-7);
  EXPECT_NEAR(fidelity_direct(zero.matrix(), mixed.matrix()), 1.0 / std::sqrt(2.0), 1e-12);
}

TEST(Fidelity, RandomStatesMatchClosedFormAndAreSymmetric) {
  std::mt19937_64 rng(67);
  for (Index n : {2, 3, 4, 6}) {
    const HilbertSpace s({static_cast<int>(n)});
    const HermitianOp a(s, gesq::testing::random_density(n, rng));
    const HermitianOp b(s, gesq::testing::random_density(n, rng));
    const double ab = fidelity_sdp(a, b).value;
    EXPECT_NEAR(ab, fidelity_direct(a.matrix(), b.matrix()), 1e-6);
    EXPECT_NEAR(ab, fidelity_sdp(b, a).value, 1e-7);
  }
}

TEST(Fidelity, GmBound) {
  const HermitianOp rho = make_noisy_state(ges_2xd_pow(GesParams{3, 3}), 0.0);
  EXPECT_NEAR(fidelity_gm_bound(rho).value, 0.4150, 2e-3);
  EXPECT_NEAR(fidelity_gm_bound(make_noisy_state(w_span_subspace(3), 1.0)).value, 0.0, 1e-7);
}

// Reference from an independent cvxpy/Clarabel solve of the same program
// (σ_K ⪰ 0, σ_K^{T_K} ⪰ 0, Σ tr σ_K = 1).
TEST(Fidelity, GgmBound) {
  const HermitianOp rho = make_noisy_state(ges_2xd_pow(GesParams{3, 3}), 0.0);
  const BoundResult r = fidelity_ggm_bound(rho);
  EXPECT_NEAR(r.value, 0.24999636, 1e-5);
  EXPECT_LE(r.value, fidelity_gm_bound(rho).value + 1e-7);
  EXPECT_NEAR(fidelity_ggm_bound(make_noisy_state(w_span_subspace(3), 1.0)).value, 0.0, 1e-7);
}

TEST(Solver, FailureIsReportedNotFabricated) {
  SdpOptions o;
  o.ipm.max_iterations = 1;
  EXPECT_THROW(gm_lower_bound(ges_2xd_pow(GesParams{3, 3}), o), SolverFailure);
  try {
    gm_lower_bound(ges_2xd_pow(GesParams{3, 3}), o);
  } catch (const SolverFailure& e) {
    EXPECT_NE(e.status(), SolveStatus::kOptimal);
  }
}
