#include "gesq/ipm_solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace gesq {
namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

double inner(const LmiBlock& b, int i, const MatrixXd& g) {
  double s = 0.0;
  for (int e = b.start[i]; e < b.start[i + 1]; ++e) s += b.entries[e].value * g(b.entries[e].row, b.entries[e].col);
  return s;
}

void add_scaled(const LmiBlock& b, int i, double scale, MatrixXd& out) {
  for (int e = b.start[i]; e < b.start[i + 1]; ++e) out(b.entries[e].row, b.entries[e].col) += scale * b.entries[e].value;
}

MatrixXd operator_image(const LmiBlock& b, const VectorXd& y) {
  MatrixXd out = MatrixXd::Zero(b.size, b.size);
  for (int i = 0; i + 1 < static_cast<int>(b.start.size()); ++i) {
    if (y(i) != 0.0) add_scaled(b, i, y(i), out);
  }
  return out;
}

// Largest alpha with X + alpha dX ⪰ 0, given the Cholesky factor of X.
double max_step(const Eigen::LLT<MatrixXd>& chol, const MatrixXd& dx) {
  MatrixXd t = chol.matrixL().solve(dx);
  t = chol.matrixL().solve(t.transpose().eval());
  t = 0.5 * (t + t.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(t, Eigen::EigenvaluesOnly);
  const double lam = es.eigenvalues().minCoeff();
  return lam >= 0.0 ? std::numeric_limits<double>::infinity() : -1.0 / lam;
}

// M_ij = Σ_b tr(F_i Z F_j W), lower triangle.
void assemble_schur(const Lmi& lmi, const std::vector<MatrixXd>& z, const std::vector<MatrixXd>& w, MatrixXd& m) {
  const int n = lmi.m;
  m.setZero(n, n);
  for (std::size_t bi = 0; bi < lmi.blocks.size(); ++bi) {
    const LmiBlock& b = lmi.blocks[bi];
    const MatrixXd& zb = z[bi];
    const MatrixXd& wb = w[bi];
    const LmiEntry* ent = b.entries.data();
    const int* start = b.start.data();
    for (int i = 0; i < n; ++i) {
      for (int e = start[i]; e < start[i + 1]; ++e) {
        const int a = ent[e].row;
        const int beta = ent[e].col;
        const double v = ent[e].value;
        const double* zcol = zb.data() + static_cast<Index>(beta) * b.size;  // Z(beta, .) by symmetry
        const double* wcol = wb.data() + static_cast<Index>(a) * b.size;     // W(., a) by symmetry
        double* mcol = m.data() + static_cast<Index>(i) * n;
        for (int j = i; j < n; ++j) {
          double acc = 0.0;
          for (int f = start[j]; f < start[j + 1]; ++f) acc += ent[f].value * zcol[ent[f].row] * wcol[ent[f].col];
          mcol[j] += v * acc;
        }
      }
    }
  }
}

}  // namespace

std::string to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::kOptimal:
      return "optimal";
    case SolveStatus::kNearOptimal:
      return "near-optimal";
    case SolveStatus::kInfeasible:
      return "infeasible";
    case SolveStatus::kNumericalFailure:
      return "numerical-failure";
  }
  return "unknown";
}

IpmResult solve_lmi(const Lmi& lmi, const IpmOptions& options) {
  const int m = lmi.m;
  const std::size_t nb = lmi.blocks.size();
  IpmResult res;
  res.y = VectorXd::Zero(m);

  double f0_norm = 0.0;
  double f0_max = 0.0;
  int total_size = 0;
  for (const LmiBlock& b : lmi.blocks) {
    f0_norm += b.f0.squaredNorm();
    f0_max = std::max(f0_max, b.f0.cwiseAbs().maxCoeff());
    total_size += b.size;
  }
  f0_norm = std::sqrt(f0_norm);
  const double c_norm = lmi.c.norm();

  if (nb == 0) {
    res.status = c_norm == 0.0 ? SolveStatus::kOptimal : SolveStatus::kInfeasible;
    res.primal_objective = res.dual_objective = lmi.c0;
    return res;
  }

  const double xi_p = 10.0 * (1.0 + f0_max);
  const double xi_d = 10.0 * (1.0 + (m > 0 ? lmi.c.cwiseAbs().maxCoeff() : 0.0));
  std::vector<MatrixXd> s(nb), z(nb), w(nb), rd(nb);
  for (std::size_t b = 0; b < nb; ++b) {
    const int n = lmi.blocks[b].size;
    s[b] = xi_p * MatrixXd::Identity(n, n);
    z[b] = xi_d * MatrixXd::Identity(n, n);
  }

  MatrixXd schur;
  VectorXd r(m), rhs(m), dy(m);
  std::vector<MatrixXd> ds(nb), dz(nb), corr(nb), g(nb);
  std::vector<Eigen::LLT<MatrixXd>> chol_s(nb), chol_z(nb);
  bool reached = false;
  bool failed = false;

  for (int iter = 0; iter <= options.max_iterations; ++iter) {
    // Residuals and convergence measures.
    double rd_norm = 0.0;
    double sz = 0.0;
    double dual_obj = lmi.c0;
    for (std::size_t b = 0; b < nb; ++b) {
      rd[b] = lmi.blocks[b].f0 + operator_image(lmi.blocks[b], res.y) - s[b];
      rd_norm += rd[b].squaredNorm();
      sz += (s[b].cwiseProduct(z[b])).sum();
      dual_obj -= (lmi.blocks[b].f0.cwiseProduct(z[b])).sum();
    }
    rd_norm = std::sqrt(rd_norm);
    for (int i = 0; i < m; ++i) {
      double acc = -lmi.c(i);
      for (std::size_t b = 0; b < nb; ++b) acc += inner(lmi.blocks[b], i, z[b]);
      r(i) = acc;
    }
    const double primal_obj = lmi.c.dot(res.y) + lmi.c0;
    res.primal_objective = primal_obj;
    res.dual_objective = dual_obj;
    res.relative_gap = std::abs(primal_obj - dual_obj) / (1.0 + std::abs(primal_obj) + std::abs(dual_obj));
    res.primal_infeasibility = rd_norm / (1.0 + f0_norm);
    res.dual_infeasibility = (m > 0 ? r.norm() : 0.0) / (1.0 + c_norm);
    res.iterations = iter;
    if (options.verbose) {
      std::fprintf(stderr, "ipm %3d  p=% .10e d=% .10e gap=%.2e pinf=%.2e dinf=%.2e\n", iter, primal_obj, dual_obj,
                   res.relative_gap, res.primal_infeasibility, res.dual_infeasibility);
    }
    if (res.relative_gap <= options.tolerance && res.primal_infeasibility <= options.tolerance &&
        res.dual_infeasibility <= options.tolerance) {
      reached = true;
      break;
    }
    if (iter == options.max_iterations) break;
    if ((m > 0 && res.y.cwiseAbs().maxCoeff() > 1e10) || sz > 1e14) {
      res.status = SolveStatus::kInfeasible;
      failed = true;
      break;
    }

    const double mu = sz / total_size;
    bool chol_ok = true;
    for (std::size_t b = 0; b < nb; ++b) {
      chol_s[b].compute(s[b]);
      chol_z[b].compute(z[b]);
      if (chol_s[b].info() != Eigen::Success || chol_z[b].info() != Eigen::Success) chol_ok = false;
      w[b] = chol_s[b].solve(MatrixXd::Identity(s[b].rows(), s[b].cols()));
      w[b] = 0.5 * (w[b] + w[b].transpose()).eval();
    }
    if (!chol_ok) {
      failed = true;
      break;
    }

    // Schur complement, with a diagonal shift if it is not numerically PD.
    Eigen::LLT<MatrixXd> chol_m;
    if (m > 0) {
      assemble_schur(lmi, z, w, schur);
      const double diag_max = schur.diagonal().cwiseAbs().maxCoeff();
      chol_m.compute(schur);
      for (double shift = 1e-14; chol_m.info() != Eigen::Success && shift < 1e-4; shift *= 100.0) {
        MatrixXd shifted = schur;
        shifted.diagonal().array() += shift * std::max(1.0, diag_max);
        chol_m.compute(shifted);
      }
      if (chol_m.info() != Eigen::Success) {
        failed = true;
        break;
      }
    }

    auto direction = [&](double target_mu, bool with_corrector) {
      for (std::size_t b = 0; b < nb; ++b) {
        g[b] = -z[b] * rd[b] * w[b];
        if (target_mu != 0.0) g[b] += target_mu * w[b];
        if (with_corrector) g[b] -= corr[b];
      }
      for (int i = 0; i < m; ++i) {
        double acc = -lmi.c(i);
        for (std::size_t b = 0; b < nb; ++b) acc += inner(lmi.blocks[b], i, g[b]);
        rhs(i) = acc;
      }
      if (m > 0) dy = chol_m.solve(rhs);
      for (std::size_t b = 0; b < nb; ++b) {
        ds[b] = rd[b] + operator_image(lmi.blocks[b], dy);
        MatrixXd t = -z[b] - z[b] * ds[b] * w[b];
        if (target_mu != 0.0) t += target_mu * w[b];
        if (with_corrector) t -= corr[b];
        dz[b] = 0.5 * (t + t.transpose());
      }
    };
    auto step_lengths = [&](double fraction) {
      double ap = std::numeric_limits<double>::infinity();
      double ad = ap;
      for (std::size_t b = 0; b < nb; ++b) {
        ap = std::min(ap, max_step(chol_s[b], ds[b]));
        ad = std::min(ad, max_step(chol_z[b], dz[b]));
      }
      return std::pair{std::min(1.0, fraction * ap), std::min(1.0, fraction * ad)};
    };

    // Predictor.
    direction(0.0, false);
    const auto [ap_aff, ad_aff] = step_lengths(1.0);
    double mu_aff = 0.0;
    for (std::size_t b = 0; b < nb; ++b) {
      mu_aff += ((s[b] + ap_aff * ds[b]).cwiseProduct(z[b] + ad_aff * dz[b])).sum();
      corr[b] = dz[b] * ds[b] * w[b];
    }
    mu_aff /= total_size;
    const double sigma = std::clamp(std::pow(mu_aff / mu, 3.0), 0.0, 1.0);

    // Corrector.
    direction(sigma * mu, true);
    const auto [ap, ad] = step_lengths(options.step_fraction);
    if (m > 0) res.y += ap * dy;
    for (std::size_t b = 0; b < nb; ++b) {
      s[b] += ap * ds[b];
      z[b] += ad * dz[b];
    }
    if (ap < 1e-12 && ad < 1e-12) break;
  }

  res.slack = s;
  res.dual = z;
  if (!failed || res.status != SolveStatus::kInfeasible) {
    const double worst = std::max({res.relative_gap, res.primal_infeasibility, res.dual_infeasibility});
    if (reached || worst <= options.accept_tolerance) {
      res.status = SolveStatus::kOptimal;
    } else if (worst <= 1e3 * options.accept_tolerance) {
      res.status = SolveStatus::kNearOptimal;
    } else {
      res.status = SolveStatus::kNumericalFailure;
    }
  }
  return res;
}

}  // namespace gesq
