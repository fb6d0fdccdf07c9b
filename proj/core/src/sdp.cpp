#include "gesq/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace gesq {
namespace {

std::vector<bool> xor_masks(const std::vector<bool>& a, const std::vector<bool>& b) {
  std::vector<bool> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] != b[i];
  return out;
}

bool any(const std::vector<bool>& mask) { return std::find(mask.begin(), mask.end(), true) != mask.end(); }

// Adds scale * X^{T_mask} (plain X for an empty mask).
void add_transposed(AffineExpr& expr, VarRef var, const HilbertSpace& space, const std::vector<bool>& mask,
                    double scale = 1.0, Index offset = 0) {
  if (any(mask)) {
    expr.add_partial_transpose(var, space, mask, scale, offset);
  } else {
    expr.add(var, scale, offset);
  }
}

struct Support {
  CMatrix vectors;          // D x r
  Eigen::VectorXd weights;  // r positive eigenvalues
};

Support support_of(const CMatrix& m) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(m);
  const double top = std::max(es.eigenvalues().cwiseAbs().maxCoeff(), 1e-300);
  std::vector<Index> keep;
  for (Index i = 0; i < es.eigenvalues().size(); ++i) {
    if (es.eigenvalues()(i) > 1e-12 * top) keep.push_back(i);
  }
  if (keep.empty()) throw std::invalid_argument("fidelity: state has no support");
  Support s{CMatrix(m.rows(), static_cast<Index>(keep.size())), Eigen::VectorXd(static_cast<Index>(keep.size()))};
  for (std::size_t k = 0; k < keep.size(); ++k) {
    s.vectors.col(static_cast<Index>(k)) = es.eigenvectors().col(keep[k]);
    s.weights(static_cast<Index>(k)) = es.eigenvalues()(keep[k]);
  }
  // Keep real eigenvectors real so real data stays real.
  if (m.imag().cwiseAbs().maxCoeff() == 0.0) s.vectors = s.vectors.real().cast<Complex>();
  return s;
}

void check_state(const HermitianOp& rho, const char* who) {
  if (std::abs(rho.trace() - 1.0) > 1e-8) throw std::invalid_argument(std::string(who) + ": state must have unit trace");
  if (rho.min_eigenvalue() < -1e-10) throw std::invalid_argument(std::string(who) + ": state must be PSD");
}

BoundResult bound_or_throw(SdpSolution sol, double value, const char* what) {
  if (!sol.usable()) throw SolverFailure(std::string(what) + ": solver returned " + to_string(sol.status), sol.status);
  return {value, std::move(sol)};
}

}  // namespace

FeasibilityAudit audit_point(const ConicProgram& program, const std::vector<CMatrix>& values, double tolerance) {
  FeasibilityAudit audit;
  audit.min_psd_eigenvalue = std::numeric_limits<double>::infinity();
  for (const PsdConstraint& c : program.psd_constraints()) {
    const CMatrix m = program.evaluate(c.expr, values);
    Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (m + m.adjoint()), Eigen::EigenvaluesOnly);
    audit.min_psd_eigenvalue = std::min(audit.min_psd_eigenvalue, es.eigenvalues().minCoeff());
  }
  for (const EqualityConstraint& e : program.equalities()) {
    audit.max_equality_residual = std::max(audit.max_equality_residual, std::abs(program.evaluate(e.lhs, values) - e.rhs));
  }
  audit.passed = audit.min_psd_eigenvalue >= -tolerance && audit.max_equality_residual <= tolerance;
  return audit;
}

SdpSolution solve(const ConicProgram& program, const SdpOptions& options) {
  const CompiledProgram compiled = compile(program);
  SdpSolution sol;
  if (compiled.infeasible_equalities) {
    sol.status = SolveStatus::kInfeasible;
    return sol;
  }
  const IpmResult ipm = solve_lmi(compiled.lmi, options.ipm);
  sol.status = ipm.status;
  sol.iterations = ipm.iterations;
  sol.duality_gap = ipm.relative_gap;
  sol.values = compiled.variable_values(program, ipm.y);
  sol.objective = program.evaluate(program.objective(), sol.values);
  sol.audit = audit_point(program, sol.values, options.audit_tolerance);
  return sol;
}

// ---------------------------------------------------------------------------
// Builders

ConicProgram ppt_relaxation_program(const Subspace& subspace, const std::vector<Bipartition>& cuts) {
  const HilbertSpace& space = subspace.space();
  const Index n = space.total_dim();
  ConicProgram prog;
  const VarRef rho = prog.add_hermitian(n, "rho");
  AffineExpr psd(n);
  psd.add(rho);
  prog.add_psd(std::move(psd), "rho>=0");
  for (const Bipartition& cut : cuts) {
    if (cut.n_parties() != space.parties()) throw std::invalid_argument("ppt_relaxation_program: cut mismatch");
    AffineExpr pt(n);
    pt.add_partial_transpose(rho, space, cut.mask());
    prog.add_psd(std::move(pt), "rho^T" + cut.to_string() + ">=0");
  }
  prog.add_equality({{rho, CMatrix::Identity(n, n)}}, 1.0, "tr rho = 1");
  prog.set_objective(Sense::kMinimize, {{rho, subspace.complement_projector().matrix()}});
  return prog;
}

ConicProgram ppt_mixture_program(const HermitianOp& rho, bool fully_ppt) {
  const HilbertSpace& space = rho.space();
  const Index n = space.total_dim();
  const std::vector<Bipartition> cuts = Bipartition::all(space.parties());
  std::vector<std::vector<bool>> masks;
  for (const Bipartition& cut : cuts) masks.push_back(cut.mask());
  const CMatrix identity = CMatrix::Identity(n, n);
  const CMatrix rho_t0 = partial_transpose(rho.matrix(), space, masks[0]);

  ConicProgram prog;
  if (fully_ppt) {
    // W = Q_K^{T_K} for every K, so Q_K = (Q_0^{T_0})^{T_K}.
    const VarRef q0 = prog.add_hermitian(n, "Q0");
    for (std::size_t k = 0; k < cuts.size(); ++k) {
      const std::vector<bool> mask = xor_masks(masks[0], masks[k]);
      AffineExpr lower(n);
      add_transposed(lower, q0, space, mask);
      prog.add_psd(std::move(lower), "Q" + std::to_string(k) + ">=0");
      AffineExpr upper(n);
      upper.add_constant(identity);
      add_transposed(upper, q0, space, mask, -1.0);
      prog.add_psd(std::move(upper), "Q" + std::to_string(k) + "<=I");
    }
    prog.set_objective(Sense::kMinimize, {{q0, rho_t0}});
    return prog;
  }

  // W = P_0 + Q_0^{T_0}; for K > 0, P_K = W - Q_K^{T_K}.
  const VarRef p0 = prog.add_hermitian(n, "P0");
  std::vector<VarRef> q;
  for (std::size_t k = 0; k < cuts.size(); ++k) q.push_back(prog.add_hermitian(n, "Q" + std::to_string(k)));
  prog.add_box(p0, "P0");
  for (std::size_t k = 0; k < cuts.size(); ++k) prog.add_box(q[k], "Q" + std::to_string(k));
  for (std::size_t k = 1; k < cuts.size(); ++k) {
    AffineExpr lower(n);
    lower.add(p0);
    lower.add_partial_transpose(q[0], space, masks[0]);
    lower.add_partial_transpose(q[k], space, masks[k], -1.0);
    prog.add_psd(std::move(lower), "P" + std::to_string(k) + ">=0");
    AffineExpr upper(n);
    upper.add_constant(identity);
    upper.add(p0, -1.0);
    upper.add_partial_transpose(q[0], space, masks[0], -1.0);
    upper.add_partial_transpose(q[k], space, masks[k], 1.0);
    prog.add_psd(std::move(upper), "P" + std::to_string(k) + "<=I");
  }
  prog.set_objective(Sense::kMinimize, {{p0, rho.matrix()}, {q[0], rho_t0}});
  return prog;
}

ConicProgram fidelity_program(const HermitianOp& rho, const HermitianOp& sigma) {
  if (!(rho.space() == sigma.space())) throw std::invalid_argument("fidelity: states live on different spaces");
  const Support a = support_of(rho.matrix());
  const Support b = support_of(sigma.matrix());
  const Index r = a.weights.size();
  const Index s = b.weights.size();
  ConicProgram prog;
  const VarRef x = prog.add_rectangular(r, s, "X");
  AffineExpr block(r + s);
  block.add_constant(a.weights.cast<Complex>().asDiagonal().toDenseMatrix(), 0);
  block.add_constant(b.weights.cast<Complex>().asDiagonal().toDenseMatrix(), r);
  block.add_off_diagonal(x, 0, r);
  prog.add_psd(std::move(block), "[[rho,X],[X^,sigma]]>=0");
  prog.set_objective(Sense::kMaximize, {{x, a.vectors.adjoint() * b.vectors}});
  return prog;
}

namespace {

// Shared part of the fidelity relaxations: [[Λ, X], [X^†, σ]] with ρ = U Λ U^†
// and σ given by the listed variables.
VarRef add_fidelity_block(ConicProgram& prog, const HermitianOp& rho, const std::vector<VarRef>& sigma_parts) {
  const Support a = support_of(rho.matrix());
  const Index r = a.weights.size();
  const Index n = rho.dim();
  const VarRef x = prog.add_rectangular(r, n, "X");
  AffineExpr block(r + n);
  block.add_constant(a.weights.cast<Complex>().asDiagonal().toDenseMatrix(), 0);
  block.add_off_diagonal(x, 0, r);
  for (VarRef part : sigma_parts) block.add(part, 1.0, r);
  prog.add_psd(std::move(block), "[[rho,X],[X^,sigma]]>=0");
  prog.set_objective(Sense::kMaximize, {{x, a.vectors.adjoint()}});
  return x;
}

}  // namespace

ConicProgram fidelity_gm_program(const HermitianOp& rho) {
  const HilbertSpace& space = rho.space();
  const Index n = space.total_dim();
  ConicProgram prog;
  const VarRef sigma = prog.add_hermitian(n, "sigma");
  // sigma ⪰ 0 follows from the block constraint.
  for (const Bipartition& cut : Bipartition::all(space.parties())) {
    AffineExpr pt(n);
    pt.add_partial_transpose(sigma, space, cut.mask());
    prog.add_psd(std::move(pt), "sigma^T" + cut.to_string() + ">=0");
  }
  prog.add_equality({{sigma, CMatrix::Identity(n, n)}}, 1.0, "tr sigma = 1");
  add_fidelity_block(prog, rho, {sigma});
  return prog;
}

ConicProgram fidelity_ggm_program(const HermitianOp& rho) {
  const HilbertSpace& space = rho.space();
  const Index n = space.total_dim();
  ConicProgram prog;
  std::vector<VarRef> parts;
  std::vector<std::pair<VarRef, CMatrix>> trace;
  for (const Bipartition& cut : Bipartition::all(space.parties())) {
    const VarRef part = prog.add_hermitian(n, "sigma" + cut.to_string());
    AffineExpr psd(n);
    psd.add(part);
    prog.add_psd(std::move(psd), "sigma" + cut.to_string() + ">=0");
    AffineExpr pt(n);
    pt.add_partial_transpose(part, space, cut.mask());
    prog.add_psd(std::move(pt), "sigma" + cut.to_string() + "^T>=0");
    parts.push_back(part);
    trace.emplace_back(part, CMatrix::Identity(n, n));
  }
  prog.add_equality(std::move(trace), 1.0, "sum tr sigma_K = 1");
  add_fidelity_block(prog, rho, parts);
  return prog;
}

// ---------------------------------------------------------------------------
// Bounds

BoundResult gm_lower_bound(const Subspace& subspace, const SdpOptions& options) {
  SdpSolution sol = solve(ppt_relaxation_program(subspace, Bipartition::all(subspace.space().parties())), options);
  const double value = std::max(0.0, sol.objective);
  return bound_or_throw(std::move(sol), value, "gm_lower_bound");
}

GgmBound ggm_lower_bound(const Subspace& subspace, const SdpOptions& options) {
  GgmBound out;
  for (const Bipartition& cut : Bipartition::all(subspace.space().parties())) {
    SdpSolution sol = solve(ppt_relaxation_program(subspace, {cut}), options);
    const double value = std::max(0.0, sol.objective);
    BoundResult b = bound_or_throw(std::move(sol), value, "ggm_lower_bound");
    if (!out.cut || b.value < out.value) {
      out.value = b.value;
      out.cut = cut;
    }
    out.per_cut.push_back({cut, std::move(b)});
  }
  return out;
}

BoundResult ppt_mixture_monotone(const HermitianOp& rho, bool fully_ppt, const SdpOptions& options) {
  check_state(rho, "ppt_mixture_monotone");
  SdpSolution sol = solve(ppt_mixture_program(rho, fully_ppt), options);
  const double value = std::max(0.0, -sol.objective);
  return bound_or_throw(std::move(sol), value, "ppt_mixture_monotone");
}

BoundResult fidelity_sdp(const HermitianOp& rho, const HermitianOp& sigma, const SdpOptions& options) {
  check_state(rho, "fidelity_sdp");
  check_state(sigma, "fidelity_sdp");
  SdpSolution sol = solve(fidelity_program(rho, sigma), options);
  const double value = sol.objective;
  return bound_or_throw(std::move(sol), value, "fidelity_sdp");
}

double fidelity_direct(const CMatrix& rho, const CMatrix& sigma) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(rho);
  const Eigen::VectorXd root = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  const CMatrix sqrt_rho = es.eigenvectors() * root.cast<Complex>().asDiagonal() * es.eigenvectors().adjoint();
  const CMatrix inner = sqrt_rho * sigma * sqrt_rho;
  Eigen::SelfAdjointEigenSolver<CMatrix> es2(0.5 * (inner + inner.adjoint()), Eigen::EigenvaluesOnly);
  return es2.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
}

BoundResult fidelity_gm_bound(const HermitianOp& rho, const SdpOptions& options) {
  check_state(rho, "fidelity_gm_bound");
  SdpSolution sol = solve(fidelity_gm_program(rho), options);
  const double f = sol.objective;
  return bound_or_throw(std::move(sol), std::max(0.0, 1.0 - f * f), "fidelity_gm_bound");
}

BoundResult fidelity_ggm_bound(const HermitianOp& rho, const SdpOptions& options) {
  check_state(rho, "fidelity_ggm_bound");
  SdpSolution sol = solve(fidelity_ggm_program(rho), options);
  const double f = sol.objective;
  return bound_or_throw(std::move(sol), std::max(0.0, 1.0 - f * f), "fidelity_ggm_bound");
}

}  // namespace gesq
