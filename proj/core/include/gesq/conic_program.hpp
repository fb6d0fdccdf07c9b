#pragma once

// Complex semidefinite programs over Hermitian and rectangular matrix
// variables, and their compilation to a real linear matrix inequality
//
//   minimize  c^T y + c0   subject to  F0 + Σ_i y_i F_i ⪰ 0  (block diagonal).
//
// PSD constraints are affine Hermitian expressions built from terms
// scale * X, scale * X^{T_K} (partial transpose) or, for rectangular X, the
// pair X at (r, c) and X^† at (c, r). Scalar equalities Σ Re<A_v, X_v> = b
// are eliminated by substitution during compilation.
//
// When every piece of data is real the program is compiled over real
// symmetric matrices (conjugation maps feasible points to feasible points
// with the same objective, so the optimum is attained at a real point).
// Otherwise each Hermitian block H = A + iB becomes [[A, -B], [B, A]].

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gesq/tensor_core.hpp"

namespace gesq {

struct VarRef {
  int index = -1;
};

struct ExprTerm {
  int var = -1;
  double scale = 1.0;
  Index row = 0;
  Index col = 0;
  bool with_adjoint = false;  // rectangular variables: also place X^† at (col, row)
  std::optional<HilbertSpace> pt_space;
  std::vector<bool> pt_mask;
};

/// Hermitian-valued affine expression of a fixed size.
class AffineExpr {
 public:
  explicit AffineExpr(Index size);

  /// Square variable placed on the diagonal at (offset, offset).
  AffineExpr& add(VarRef var, double scale = 1.0, Index offset = 0);
  /// Partial transpose of a square variable over the parties flagged in `mask`.
  AffineExpr& add_partial_transpose(VarRef var, const HilbertSpace& space, std::vector<bool> mask,
                                    double scale = 1.0, Index offset = 0);
  /// Rectangular variable at (row, col) together with its adjoint at (col, row).
  AffineExpr& add_off_diagonal(VarRef var, Index row, Index col, double scale = 1.0);
  /// Constant Hermitian block at (offset, offset).
  AffineExpr& add_constant(const CMatrix& c, Index offset = 0);

  Index size() const { return size_; }
  const std::vector<ExprTerm>& terms() const { return terms_; }
  const CMatrix& constant() const { return constant_; }

 private:
  Index size_;
  std::vector<ExprTerm> terms_;
  CMatrix constant_;
};

enum class Sense { kMinimize, kMaximize };

struct Variable {
  std::string name;
  Index rows = 0;
  Index cols = 0;
  bool hermitian = true;
};

struct PsdConstraint {
  std::string name;
  AffineExpr expr;
};

struct LinearForm {
  std::vector<std::pair<int, CMatrix>> weights;  // Σ Re<W_v, X_v>
  double constant = 0.0;
};

struct EqualityConstraint {
  std::string name;
  LinearForm lhs;
  double rhs = 0.0;
};

class ConicProgram {
 public:
  VarRef add_hermitian(Index n, std::string name);
  VarRef add_rectangular(Index rows, Index cols, std::string name);

  void add_psd(AffineExpr expr, std::string name);
  /// 0 ⪯ X ⪯ I.
  void add_box(VarRef var, std::string name);
  /// Σ_v Re<A_v, X_v> = rhs.
  void add_equality(std::vector<std::pair<VarRef, CMatrix>> coeffs, double rhs, std::string name);
  void set_objective(Sense sense, std::vector<std::pair<VarRef, CMatrix>> weights, double constant = 0.0);

  const std::vector<Variable>& variables() const { return vars_; }
  const std::vector<PsdConstraint>& psd_constraints() const { return psd_; }
  const std::vector<EqualityConstraint>& equalities() const { return eqs_; }
  const LinearForm& objective() const { return objective_; }
  Sense sense() const { return sense_; }

  /// Value of the affine expression at the given variable values.
  CMatrix evaluate(const AffineExpr& expr, const std::vector<CMatrix>& values) const;
  double evaluate(const LinearForm& form, const std::vector<CMatrix>& values) const;

  /// True when every constant, weight and coefficient is real.
  bool all_data_real() const;

 private:
  void check_var(VarRef v) const;

  std::vector<Variable> vars_;
  std::vector<PsdConstraint> psd_;
  std::vector<EqualityConstraint> eqs_;
  LinearForm objective_;
  Sense sense_ = Sense::kMinimize;
};

// ---------------------------------------------------------------------------
// Real LMI form

struct LmiEntry {
  int row;
  int col;
  double value;
};

/// One diagonal block; F_i is stored as a list of (row, col, value) entries
/// covering both triangles (repeated positions add up).
struct LmiBlock {
  int size = 0;
  Eigen::MatrixXd f0;
  std::vector<int> start;  // entries of F_i are [start[i], start[i+1])
  std::vector<LmiEntry> entries;
};

struct Lmi {
  int m = 0;
  Eigen::VectorXd c;
  double c0 = 0.0;
  std::vector<LmiBlock> blocks;
};

/// Result of compiling a ConicProgram: the LMI plus the affine map that
/// recovers the complex variables from the reduced parameters.
struct CompiledProgram {
  Lmi lmi;
  bool real_field = false;
  bool maximize = false;
  bool infeasible_equalities = false;

  // Full parameter vector: y_full = expand(y_reduced).
  int full_params = 0;
  std::vector<int> free_params;  // reduced index -> full index
  struct Pivot {
    int param;
    double offset;
    std::vector<std::pair<int, double>> coeffs;  // over reduced indices
  };
  std::vector<Pivot> pivots;

  // Per full parameter: which variable and what unit matrix it multiplies.
  struct ParamUnit {
    int var;
    Index row;
    Index col;
    bool imaginary;
  };
  std::vector<ParamUnit> units;

  Eigen::VectorXd expand(const Eigen::VectorXd& reduced) const;
  std::vector<CMatrix> variable_values(const ConicProgram& program, const Eigen::VectorXd& reduced) const;
};

CompiledProgram compile(const ConicProgram& program);

/// Sparse JSON dump of the compiled LMI (format "gesq.lmi/1"):
///   {"format", "m", "c": [...], "c0", "sense", "real_field",
///    "blocks": [{"size", "f0": [[r, c, v], ...], "f": [[i, r, c, v], ...]}]}
/// Only the upper triangle (r <= c) of each matrix is listed.
nlohmann::json lmi_to_json(const CompiledProgram& compiled);

}  // namespace gesq
