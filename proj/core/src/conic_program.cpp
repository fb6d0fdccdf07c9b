#include "gesq/conic_program.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

namespace gesq {

// ---------------------------------------------------------------------------
// AffineExpr

AffineExpr::AffineExpr(Index size) : size_(size), constant_(CMatrix::Zero(size, size)) {
  if (size <= 0) throw std::invalid_argument("AffineExpr: size must be positive");
}

AffineExpr& AffineExpr::add(VarRef var, double scale, Index offset) {
  terms_.push_back({var.index, scale, offset, offset, false, std::nullopt, {}});
  return *this;
}

AffineExpr& AffineExpr::add_partial_transpose(VarRef var, const HilbertSpace& space, std::vector<bool> mask,
                                              double scale, Index offset) {
  if (static_cast<int>(mask.size()) != space.parties()) {
    throw std::invalid_argument("AffineExpr: mask size does not match the space");
  }
  terms_.push_back({var.index, scale, offset, offset, false, space, std::move(mask)});
  return *this;
}

AffineExpr& AffineExpr::add_off_diagonal(VarRef var, Index row, Index col, double scale) {
  terms_.push_back({var.index, scale, row, col, true, std::nullopt, {}});
  return *this;
}

AffineExpr& AffineExpr::add_constant(const CMatrix& c, Index offset) {
  if (c.rows() != c.cols() || offset + c.rows() > size_) throw std::invalid_argument("AffineExpr: constant does not fit");
  constant_.block(offset, offset, c.rows(), c.cols()) += c;
  return *this;
}

// ---------------------------------------------------------------------------
// ConicProgram

VarRef ConicProgram::add_hermitian(Index n, std::string name) {
  if (n <= 0) throw std::invalid_argument("ConicProgram: variable size must be positive");
  vars_.push_back({std::move(name), n, n, true});
  return {static_cast<int>(vars_.size()) - 1};
}

VarRef ConicProgram::add_rectangular(Index rows, Index cols, std::string name) {
  if (rows <= 0 || cols <= 0) throw std::invalid_argument("ConicProgram: variable size must be positive");
  vars_.push_back({std::move(name), rows, cols, false});
  return {static_cast<int>(vars_.size()) - 1};
}

void ConicProgram::check_var(VarRef v) const {
  if (v.index < 0 || v.index >= static_cast<int>(vars_.size())) throw std::out_of_range("ConicProgram: unknown variable");
}

void ConicProgram::add_psd(AffineExpr expr, std::string name) {
  for (const ExprTerm& t : expr.terms()) {
    check_var({t.var});
    const Variable& v = vars_[t.var];
    if (t.with_adjoint) {
      if (v.hermitian) throw std::invalid_argument("ConicProgram: off-diagonal placement needs a rectangular variable");
      if (t.row + v.rows > expr.size() || t.col + v.cols > expr.size() ||
          (t.row + v.rows > t.col && t.col + v.cols > t.row)) {
        throw std::invalid_argument("ConicProgram: off-diagonal block overlaps the diagonal or does not fit");
      }
    } else {
      if (!v.hermitian) throw std::invalid_argument("ConicProgram: rectangular variables need add_off_diagonal");
      if (t.row + v.rows > expr.size()) throw std::invalid_argument("ConicProgram: term does not fit in '" + name + "'");
      if (t.pt_space && t.pt_space->total_dim() != v.rows) {
        throw std::invalid_argument("ConicProgram: partial-transpose space does not match the variable");
      }
    }
  }
  const CMatrix& c = expr.constant();
  if ((c - c.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, c.cwiseAbs().maxCoeff())) {
    throw std::invalid_argument("ConicProgram: constant part of '" + name + "' is not Hermitian");
  }
  psd_.push_back({std::move(name), std::move(expr)});
}

void ConicProgram::add_box(VarRef var, std::string name) {
  check_var(var);
  const Index n = vars_[var.index].rows;
  AffineExpr lower(n);
  lower.add(var);
  add_psd(std::move(lower), name + ">=0");
  AffineExpr upper(n);
  upper.add_constant(CMatrix::Identity(n, n)).add(var, -1.0);
  add_psd(std::move(upper), name + "<=I");
}

void ConicProgram::add_equality(std::vector<std::pair<VarRef, CMatrix>> coeffs, double rhs, std::string name) {
  EqualityConstraint eq{std::move(name), {}, rhs};
  for (auto& [v, a] : coeffs) {
    check_var(v);
    if (a.rows() != vars_[v.index].rows || a.cols() != vars_[v.index].cols) {
      throw std::invalid_argument("ConicProgram: equality coefficient has the wrong shape");
    }
    eq.lhs.weights.emplace_back(v.index, std::move(a));
  }
  eqs_.push_back(std::move(eq));
}

void ConicProgram::set_objective(Sense sense, std::vector<std::pair<VarRef, CMatrix>> weights, double constant) {
  sense_ = sense;
  objective_ = {};
  objective_.constant = constant;
  for (auto& [v, w] : weights) {
    check_var(v);
    if (w.rows() != vars_[v.index].rows || w.cols() != vars_[v.index].cols) {
      throw std::invalid_argument("ConicProgram: objective weight has the wrong shape");
    }
    objective_.weights.emplace_back(v.index, std::move(w));
  }
}

CMatrix ConicProgram::evaluate(const AffineExpr& expr, const std::vector<CMatrix>& values) const {
  CMatrix out = expr.constant();
  for (const ExprTerm& t : expr.terms()) {
    const CMatrix& x = values.at(t.var);
    if (t.with_adjoint) {
      out.block(t.row, t.col, x.rows(), x.cols()) += t.scale * x;
      out.block(t.col, t.row, x.cols(), x.rows()) += t.scale * x.adjoint();
    } else if (t.pt_space) {
      out.block(t.row, t.col, x.rows(), x.cols()) += t.scale * partial_transpose(x, *t.pt_space, t.pt_mask);
    } else {
      out.block(t.row, t.col, x.rows(), x.cols()) += t.scale * x;
    }
  }
  return out;
}

double ConicProgram::evaluate(const LinearForm& form, const std::vector<CMatrix>& values) const {
  double total = form.constant;
  for (const auto& [v, w] : form.weights) total += (w.conjugate().cwiseProduct(values.at(v))).sum().real();
  return total;
}

bool ConicProgram::all_data_real() const {
  auto real = [](const CMatrix& m) { return m.imag().cwiseAbs().maxCoeff() == 0.0; };
  for (const auto& c : psd_) {
    if (!real(c.expr.constant())) return false;
  }
  for (const auto& e : eqs_) {
    for (const auto& [v, a] : e.lhs.weights) {
      if (!real(a)) return false;
    }
  }
  for (const auto& [v, w] : objective_.weights) {
    if (!real(w)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Compilation

namespace {

struct UnitEntry {
  Index row;
  Index col;
  Complex value;
};

std::vector<UnitEntry> unit_entries(const Variable& v, const CompiledProgram::ParamUnit& u) {
  const Complex one = u.imaginary ? Complex(0.0, 1.0) : Complex(1.0, 0.0);
  if (!v.hermitian) return {{u.row, u.col, one}};
  if (u.row == u.col) return {{u.row, u.row, 1.0}};
  return {{u.row, u.col, one}, {u.col, u.row, std::conj(one)}};
}

void embed(std::vector<LmiEntry>& out, Index r, Index c, Complex z, Index n, bool real_field) {
  if (real_field) {
    if (z.real() != 0.0) out.push_back({static_cast<int>(r), static_cast<int>(c), z.real()});
    return;
  }
  if (z.real() != 0.0) {
    out.push_back({static_cast<int>(r), static_cast<int>(c), z.real()});
    out.push_back({static_cast<int>(r + n), static_cast<int>(c + n), z.real()});
  }
  if (z.imag() != 0.0) {
    out.push_back({static_cast<int>(r), static_cast<int>(c + n), -z.imag()});
    out.push_back({static_cast<int>(r + n), static_cast<int>(c), z.imag()});
  }
}

Eigen::MatrixXd embed_dense(const CMatrix& m, bool real_field) {
  if (real_field) return m.real();
  const Index n = m.rows();
  Eigen::MatrixXd out(2 * n, 2 * n);
  out << m.real(), -m.imag(), m.imag(), m.real();
  return out;
}

double unit_inner(const CMatrix& w, const std::vector<UnitEntry>& unit) {
  double s = 0.0;
  for (const UnitEntry& e : unit) s += (std::conj(w(e.row, e.col)) * e.value).real();
  return s;
}

}  // namespace

CompiledProgram compile(const ConicProgram& program) {
  CompiledProgram out;
  out.real_field = program.all_data_real();
  out.maximize = program.sense() == Sense::kMaximize;
  const auto& vars = program.variables();

  // Enumerate real parameters.
  std::vector<int> var_begin(vars.size() + 1, 0);
  for (std::size_t v = 0; v < vars.size(); ++v) {
    var_begin[v] = static_cast<int>(out.units.size());
    const Variable& var = vars[v];
    if (var.hermitian) {
      for (Index c = 0; c < var.cols; ++c) {
        for (Index r = 0; r <= c; ++r) {
          out.units.push_back({static_cast<int>(v), r, c, false});
          if (r != c && !out.real_field) out.units.push_back({static_cast<int>(v), r, c, true});
        }
      }
    } else {
      for (Index c = 0; c < var.cols; ++c) {
        for (Index r = 0; r < var.rows; ++r) {
          out.units.push_back({static_cast<int>(v), r, c, false});
          if (!out.real_field) out.units.push_back({static_cast<int>(v), r, c, true});
        }
      }
    }
  }
  var_begin[vars.size()] = static_cast<int>(out.units.size());
  const int m_full = static_cast<int>(out.units.size());
  out.full_params = m_full;

  std::vector<std::vector<UnitEntry>> units(m_full);
  for (int i = 0; i < m_full; ++i) units[i] = unit_entries(vars[out.units[i].var], out.units[i]);

  // Objective.
  Eigen::VectorXd c_full = Eigen::VectorXd::Zero(m_full);
  const double sign = out.maximize ? -1.0 : 1.0;
  for (const auto& [v, w] : program.objective().weights) {
    for (int i = var_begin[v]; i < var_begin[v + 1]; ++i) c_full(i) += sign * unit_inner(w, units[i]);
  }
  double c0 = sign * program.objective().constant;

  // Equalities, reduced by Gauss-Jordan elimination.
  const auto& eqs = program.equalities();
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(static_cast<Index>(eqs.size()), m_full);
  Eigen::VectorXd b(static_cast<Index>(eqs.size()));
  for (std::size_t k = 0; k < eqs.size(); ++k) {
    b(k) = eqs[k].rhs - eqs[k].lhs.constant;
    for (const auto& [v, coeff] : eqs[k].lhs.weights) {
      for (int i = var_begin[v]; i < var_begin[v + 1]; ++i) a(k, i) += unit_inner(coeff, units[i]);
    }
  }
  std::vector<int> pivot_of_row;
  std::vector<bool> is_pivot(m_full, false);
  for (Index k = 0; k < a.rows(); ++k) {
    Index p = 0;
    const double best = a.row(k).cwiseAbs().maxCoeff(&p);
    if (best < 1e-12) {
      if (std::abs(b(k)) > 1e-9) out.infeasible_equalities = true;
      pivot_of_row.push_back(-1);
      continue;
    }
    const double inv = 1.0 / a(k, p);
    a.row(k) *= inv;
    b(k) *= inv;
    for (Index o = 0; o < a.rows(); ++o) {
      if (o == k || a(o, p) == 0.0) continue;
      const double f = a(o, p);
      a.row(o) -= f * a.row(k);
      b(o) -= f * b(k);
    }
    pivot_of_row.push_back(static_cast<int>(p));
    is_pivot[p] = true;
  }
  std::vector<int> reduced_of(m_full, -1);
  for (int i = 0; i < m_full; ++i) {
    if (!is_pivot[i]) {
      reduced_of[i] = static_cast<int>(out.free_params.size());
      out.free_params.push_back(i);
    }
  }
  // y_p = b_k - Σ_free a(k, i) y_i  for every pivot row k (rows are normalized).
  struct Sub {
    int param;
    double offset;
    std::vector<std::pair<int, double>> coeffs;  // full index, coefficient
  };
  std::vector<Sub> subs;
  for (Index k = 0; k < a.rows(); ++k) {
    const int p = pivot_of_row[k];
    if (p < 0) continue;
    Sub s{p, b(k), {}};
    CompiledProgram::Pivot piv{p, b(k), {}};
    for (int i = 0; i < m_full; ++i) {
      if (is_pivot[i] || a(k, i) == 0.0) continue;
      s.coeffs.emplace_back(i, -a(k, i));
      piv.coeffs.emplace_back(reduced_of[i], -a(k, i));
    }
    subs.push_back(std::move(s));
    out.pivots.push_back(std::move(piv));
  }
  for (const Sub& s : subs) {
    c0 += c_full(s.param) * s.offset;
    for (const auto& [i, f] : s.coeffs) c_full(i) += c_full(s.param) * f;
  }

  Lmi& lmi = out.lmi;
  lmi.m = static_cast<int>(out.free_params.size());
  lmi.c.resize(lmi.m);
  for (int k = 0; k < lmi.m; ++k) lmi.c(k) = c_full(out.free_params[k]);
  lmi.c0 = c0;

  // Blocks.
  for (const PsdConstraint& con : program.psd_constraints()) {
    const AffineExpr& expr = con.expr;
    const Index n = expr.size();
    LmiBlock block;
    block.size = static_cast<int>(out.real_field ? n : 2 * n);
    block.f0 = embed_dense(expr.constant(), out.real_field);
    std::vector<std::vector<LmiEntry>> per_param(m_full);
    for (const ExprTerm& t : expr.terms()) {
      for (int i = var_begin[t.var]; i < var_begin[t.var + 1]; ++i) {
        for (const UnitEntry& e : units[i]) {
          Index r = e.row, c = e.col;
          if (t.pt_space) std::tie(r, c) = transposed_position(r, c, *t.pt_space, t.pt_mask);
          embed(per_param[i], t.row + r, t.col + c, t.scale * e.value, n, out.real_field);
          if (t.with_adjoint) embed(per_param[i], t.col + c, t.row + r, t.scale * std::conj(e.value), n, out.real_field);
        }
      }
    }
    for (const Sub& s : subs) {
      const std::vector<LmiEntry> pivot_entries = per_param[s.param];
      for (const LmiEntry& e : pivot_entries) block.f0(e.row, e.col) += s.offset * e.value;
      for (const auto& [i, f] : s.coeffs) {
        for (const LmiEntry& e : pivot_entries) per_param[i].push_back({e.row, e.col, f * e.value});
      }
    }
    block.start.reserve(lmi.m + 1);
    for (int k = 0; k < lmi.m; ++k) {
      block.start.push_back(static_cast<int>(block.entries.size()));
      const auto& list = per_param[out.free_params[k]];
      block.entries.insert(block.entries.end(), list.begin(), list.end());
    }
    block.start.push_back(static_cast<int>(block.entries.size()));
    lmi.blocks.push_back(std::move(block));
  }
  return out;
}

Eigen::VectorXd CompiledProgram::expand(const Eigen::VectorXd& reduced) const {
  Eigen::VectorXd full = Eigen::VectorXd::Zero(full_params);
  for (std::size_t k = 0; k < free_params.size(); ++k) full(free_params[k]) = reduced(static_cast<Index>(k));
  for (const Pivot& p : pivots) {
    double v = p.offset;
    for (const auto& [k, f] : p.coeffs) v += f * reduced(k);
    full(p.param) = v;
  }
  return full;
}

std::vector<CMatrix> CompiledProgram::variable_values(const ConicProgram& program, const Eigen::VectorXd& reduced) const {
  const Eigen::VectorXd full = expand(reduced);
  std::vector<CMatrix> values;
  for (const Variable& v : program.variables()) values.push_back(CMatrix::Zero(v.rows, v.cols));
  for (int i = 0; i < full_params; ++i) {
    const ParamUnit& u = units[i];
    CMatrix& x = values[u.var];
    const Complex z = u.imaginary ? Complex(0.0, full(i)) : Complex(full(i), 0.0);
    x(u.row, u.col) += z;
    if (program.variables()[u.var].hermitian && u.row != u.col) x(u.col, u.row) += std::conj(z);
  }
  return values;
}

nlohmann::json lmi_to_json(const CompiledProgram& compiled) {
  const Lmi& lmi = compiled.lmi;
  nlohmann::json j;
  j["format"] = "gesq.lmi/1";
  j["m"] = lmi.m;
  j["c"] = std::vector<double>(lmi.c.data(), lmi.c.data() + lmi.c.size());
  j["c0"] = lmi.c0;
  j["sense"] = "minimize";
  j["real_field"] = compiled.real_field;
  nlohmann::json blocks = nlohmann::json::array();
  for (const LmiBlock& b : lmi.blocks) {
    nlohmann::json jb;
    jb["size"] = b.size;
    nlohmann::json f0 = nlohmann::json::array();
    for (int c = 0; c < b.size; ++c) {
      for (int r = 0; r <= c; ++r) {
        if (b.f0(r, c) != 0.0) f0.push_back({r, c, b.f0(r, c)});
      }
    }
    jb["f0"] = std::move(f0);
    nlohmann::json f = nlohmann::json::array();
    for (int i = 0; i < lmi.m; ++i) {
      std::map<std::pair<int, int>, double> merged;
      for (int e = b.start[i]; e < b.start[i + 1]; ++e) {
        const LmiEntry& le = b.entries[e];
        if (le.row <= le.col) merged[{le.row, le.col}] += le.value;
      }
      for (const auto& [rc, v] : merged) {
        if (v != 0.0) f.push_back({i, rc.first, rc.second, v});
      }
    }
    jb["f"] = std::move(f);
    blocks.push_back(std::move(jb));
  }
  j["blocks"] = std::move(blocks);
  return j;
}

}  // namespace gesq
