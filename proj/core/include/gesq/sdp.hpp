#pragma once

// Semidefinite bounds: PPT relaxations of the subspace (G)GM, the PPT-mixture
// monotone, the fidelity SDP and fidelity-based bounds on state entanglement.

#include <optional>
#include <string>
#include <vector>

#include "gesq/conic_program.hpp"
#include "gesq/ipm_solver.hpp"
#include "gesq/tensor_core.hpp"

namespace gesq {

struct SdpOptions {
  IpmOptions ipm;
  double audit_tolerance = 1e-7;
};

struct FeasibilityAudit {
  double min_psd_eigenvalue = 0.0;  // smallest eigenvalue across PSD constraints
  double max_equality_residual = 0.0;
  bool passed = false;
};

struct SdpSolution {
  SolveStatus status = SolveStatus::kNumericalFailure;
  double objective = 0.0;  // in the program's own sense
  std::vector<CMatrix> values;
  double duality_gap = 0.0;
  int iterations = 0;
  FeasibilityAudit audit;

  /// Optimal or near-optimal with a passing audit.
  bool usable() const {
    return (status == SolveStatus::kOptimal || status == SolveStatus::kNearOptimal) && audit.passed;
  }
};

SdpSolution solve(const ConicProgram& program, const SdpOptions& options = {});

/// Re-evaluates every constraint at the given point without the solver.
FeasibilityAudit audit_point(const ConicProgram& program, const std::vector<CMatrix>& values, double tolerance);

/// Thrown when a bound is requested but the solver did not deliver one.
class SolverFailure : public std::runtime_error {
 public:
  SolverFailure(const std::string& what, SolveStatus status) : std::runtime_error(what), status_(status) {}
  SolveStatus status() const { return status_; }

 private:
  SolveStatus status_;
};

// ---------------------------------------------------------------------------
// Program builders (exposed for --dump-program and tests)

/// min tr(P⊥ ρ) over ρ ⪰ 0, tr ρ = 1, ρ^{T_K} ⪰ 0 for every cut in `cuts`.
ConicProgram ppt_relaxation_program(const Subspace& subspace, const std::vector<Bipartition>& cuts);
ConicProgram ppt_mixture_program(const HermitianOp& rho, bool fully_ppt);
ConicProgram fidelity_program(const HermitianOp& rho, const HermitianOp& sigma);
ConicProgram fidelity_gm_program(const HermitianOp& rho);
ConicProgram fidelity_ggm_program(const HermitianOp& rho);

// ---------------------------------------------------------------------------
// Bounds

struct BoundResult {
  double value = 0.0;
  SdpSolution solution;
};

/// Lower bound on the GM of a subspace (PPT across every cut).
BoundResult gm_lower_bound(const Subspace& subspace, const SdpOptions& options = {});

struct CutBound {
  Bipartition cut;
  BoundResult bound;
};

struct GgmBound {
  double value = 0.0;
  std::optional<Bipartition> cut;
  std::vector<CutBound> per_cut;
};

/// Lower bound on the GGM of a subspace: min over cuts of the single-cut relaxation.
GgmBound ggm_lower_bound(const Subspace& subspace, const SdpOptions& options = {});

/// max(0, -min tr(W ρ)) over W = P_K + Q_K^{T_K}, 0 ⪯ P_K, Q_K ⪯ I. With
/// fully_ppt every P_K is zero.
BoundResult ppt_mixture_monotone(const HermitianOp& rho, bool fully_ppt, const SdpOptions& options = {});

/// max Re tr X over [[ρ, X], [X^†, σ]] ⪰ 0, which equals tr√(√ρ σ √ρ).
BoundResult fidelity_sdp(const HermitianOp& rho, const HermitianOp& sigma, const SdpOptions& options = {});
/// Closed-form fidelity from eigendecompositions.
double fidelity_direct(const CMatrix& rho, const CMatrix& sigma);

/// max(0, 1 - F²) with F maximized over states PPT across every cut.
BoundResult fidelity_gm_bound(const HermitianOp& rho, const SdpOptions& options = {});
/// max(0, 1 - F²) with F maximized over PPT mixtures Σ_K σ_K.
BoundResult fidelity_ggm_bound(const HermitianOp& rho, const SdpOptions& options = {});

// Tighter relaxations (symmetric PPT extensions, positive-map criteria) would
// plug in here as further program builders; none are implemented.

}  // namespace gesq
