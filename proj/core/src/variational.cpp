#include "gesq/variational.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <mutex>
#include <random>
#include <stdexcept>
#include <thread>

namespace gesq {
namespace {

struct GroupedProblem {
  CMatrix basis;  // rows in grouped party order
  std::vector<Index> group_dims;
  std::vector<Index> left;   // product of group dims before j
  std::vector<Index> right;  // product of group dims after j
};

std::vector<int> flatten_order(const HilbertSpace& space, const std::vector<std::vector<int>>& groups) {
  std::vector<int> order;
  for (const auto& g : groups) {
    if (g.empty()) throw std::invalid_argument("seesaw: empty group");
    order.insert(order.end(), g.begin(), g.end());
  }
  std::vector<int> check = order;
  std::sort(check.begin(), check.end());
  if (static_cast<int>(check.size()) != space.parties()) throw std::invalid_argument("seesaw: groups must cover every party once");
  for (int i = 0; i < space.parties(); ++i) {
    if (check[i] != i) throw std::invalid_argument("seesaw: groups must cover every party once");
  }
  return order;
}

GroupedProblem make_problem(const Subspace& subspace, const std::vector<std::vector<int>>& groups) {
  const HilbertSpace& space = subspace.space();
  const std::vector<int> order = flatten_order(space, groups);
  GroupedProblem prob;
  prob.basis = permute_parties(subspace.basis(), space, order);
  for (const auto& g : groups) {
    Index dim = 1;
    for (int p : g) dim *= space.local_dim(p);
    prob.group_dims.push_back(dim);
  }
  const std::size_t n = groups.size();
  prob.left.assign(n, 1);
  prob.right.assign(n, 1);
  for (std::size_t j = 1; j < n; ++j) prob.left[j] = prob.left[j - 1] * prob.group_dims[j - 1];
  for (std::size_t j = n - 1; j-- > 0;) prob.right[j] = prob.right[j + 1] * prob.group_dims[j + 1];
  return prob;
}

CVector conj_kron(const std::vector<CVector>& factors, std::size_t begin, std::size_t end) {
  CVector out = CVector::Ones(1);
  for (std::size_t i = begin; i < end; ++i) out = kron(out, factors[i].conjugate().eval());
  return out;
}

// Columns u_c with overlap = Σ_c |u_c^† x_active|^2.
CMatrix contract_columns(const GroupedProblem& prob, const std::vector<CVector>& factors, std::size_t active) {
  const Index g = prob.group_dims[active];
  const Index left = prob.left[active];
  const Index right = prob.right[active];
  const Index m = prob.basis.cols();
  const CVector xl = conj_kron(factors, 0, active);
  const CVector xr = conj_kron(factors, active + 1, factors.size());

  // Column-major storage of basis viewed as right x (left*g*m).
  Eigen::Map<const CMatrix> as_right(prob.basis.data(), right, left * g * m);
  const Eigen::RowVectorXcd partial = xr.transpose() * as_right;
  CMatrix w(g, m);
  for (Index c = 0; c < m; ++c) {
    Eigen::Map<const CMatrix> block(partial.data() + c * g * left, g, left);
    w.col(c) = block * xl;
  }
  return w;
}

// Top eigenvector of W W^†, working on the smaller Gram matrix.
EigenPair top_of_gram(const CMatrix& w) {
  if (w.rows() <= w.cols()) return top_eigenpair((w * w.adjoint()).eval());
  EigenPair small = top_eigenpair((w.adjoint() * w).eval());
  CVector v = w * small.vector;
  const double n = v.norm();
  if (n == 0.0) {
    v = CVector::Unit(w.rows(), 0);
  } else {
    v /= n;
    Index lead = 0;
    while (lead < v.size() - 1 && std::abs(v(lead)) < 1e-8) ++lead;
    v /= v(lead) / std::abs(v(lead));
  }
  return {small.value, v};
}

double overlap_of(const GroupedProblem& prob, const std::vector<CVector>& factors) {
  CVector x = CVector::Ones(1);
  for (const CVector& f : factors) x = kron(x, f);
  return (prob.basis.adjoint() * x).squaredNorm();
}

struct RestartOutcome {
  double overlap = 0.0;
  std::vector<CVector> factors;
  int sweeps = 0;
  bool converged = false;
  bool monotone = true;
};

RestartOutcome run_restart(const GroupedProblem& prob, const SeesawConfig& cfg, int index) {
  std::seed_seq seq{static_cast<std::uint32_t>(cfg.rng_seed), static_cast<std::uint32_t>(cfg.rng_seed >> 32),
                    static_cast<std::uint32_t>(index)};
  std::mt19937_64 rng(seq);
  RestartOutcome out;
  for (Index dim : prob.group_dims) out.factors.push_back(random_unit_vector(dim, rng));

  double current = overlap_of(prob, out.factors);
  const double slack = 1e-12;
  for (int sweep = 1; sweep <= cfg.max_sweeps; ++sweep) {
    const double start = current;
    for (std::size_t j = 0; j < out.factors.size(); ++j) {
      const EigenPair top = top_of_gram(contract_columns(prob, out.factors, j));
      if (top.value < current - slack) out.monotone = false;
      out.factors[j] = top.vector;
      current = top.value;
    }
    out.sweeps = sweep;
    if (current - start < cfg.epsilon) {
      out.converged = true;
      break;
    }
  }
  out.overlap = overlap_of(prob, out.factors);
  return out;
}

}  // namespace

void SeesawConfig::validate() const {
  if (!(epsilon > 0.0)) throw std::invalid_argument("SeesawConfig: epsilon must be positive");
  if (restarts < 1) throw std::invalid_argument("SeesawConfig: need at least one restart");
  if (max_sweeps < 1) throw std::invalid_argument("SeesawConfig: need at least one sweep");
}

SeesawResult seesaw_grouped(const Subspace& subspace, const std::vector<std::vector<int>>& groups,
                            const SeesawConfig& cfg) {
  cfg.validate();
  const GroupedProblem prob = make_problem(subspace, groups);

  std::vector<std::optional<RestartOutcome>> outcomes(cfg.restarts);
  std::atomic<int> next{0};
  const auto started = std::chrono::steady_clock::now();
  auto out_of_time = [&] {
    if (cfg.time_limit_seconds <= 0.0) return false;
    const std::chrono::duration<double> spent = std::chrono::steady_clock::now() - started;
    return spent.count() > cfg.time_limit_seconds;
  };
  auto worker = [&] {
    for (int r = next++; r < cfg.restarts; r = next++) {
      // Restart 0 always runs so a result exists.
      if (r > 0 && out_of_time()) continue;
      outcomes[r] = run_restart(prob, cfg, r);
    }
  };
  const int jobs = std::max(1, std::min(cfg.jobs, cfg.restarts));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  SeesawResult result;
  result.groups = groups;
  for (int r = 0; r < cfg.restarts; ++r) {
    if (!outcomes[r]) continue;
    const RestartOutcome& o = *outcomes[r];
    ++result.restarts_run;
    result.restart_overlaps.push_back(o.overlap);
    result.monotone = result.monotone && o.monotone;
    if (result.best_restart < 0 || o.overlap > result.overlap) {
      result.overlap = o.overlap;
      result.factors = o.factors;
      result.sweeps_used = o.sweeps;
      result.converged = o.converged;
      result.best_restart = r;
    }
  }
  result.entanglement = 1.0 - result.overlap;
  return result;
}

SeesawResult seesaw_gm(const Subspace& subspace, const SeesawConfig& cfg) {
  std::vector<std::vector<int>> groups;
  for (int p = 0; p < subspace.space().parties(); ++p) groups.push_back({p});
  return seesaw_grouped(subspace, groups, cfg);
}

SeesawResult seesaw_gm_bipartition(const Subspace& subspace, const Bipartition& cut, const SeesawConfig& cfg) {
  if (cut.n_parties() != subspace.space().parties()) {
    throw std::invalid_argument("seesaw_gm_bipartition: cut does not match the number of parties");
  }
  return seesaw_grouped(subspace, {cut.side(), cut.complement()}, cfg);
}

CutScan ggm_via_cuts(const Subspace& subspace, const SeesawConfig& cfg) {
  const int n = subspace.space().parties();
  if (n < 2) throw std::invalid_argument("ggm_via_cuts: need at least two parties");
  CutScan scan;
  for (const Bipartition& cut : Bipartition::all(n)) {
    SeesawResult r = seesaw_gm_bipartition(subspace, cut, cfg);
    if (!scan.cut || r.entanglement < scan.value) {
      scan.value = r.entanglement;
      scan.cut = cut;
    }
    scan.per_cut.emplace_back(cut, std::move(r));
  }
  return scan;
}

CMatrix group_contraction(const Subspace& subspace, const std::vector<std::vector<int>>& groups,
                          const std::vector<CVector>& factors, int active) {
  const GroupedProblem prob = make_problem(subspace, groups);
  if (factors.size() != groups.size()) throw std::invalid_argument("group_contraction: one factor per group");
  if (active < 0 || active >= static_cast<int>(groups.size())) throw std::out_of_range("group_contraction: bad index");
  for (std::size_t j = 0; j < factors.size(); ++j) {
    if (factors[j].size() != prob.group_dims[j]) throw std::invalid_argument("group_contraction: factor size mismatch");
  }
  const CMatrix w = contract_columns(prob, factors, active);
  return w * w.adjoint();
}

CVector assemble_product(const HilbertSpace& space, const std::vector<std::vector<int>>& groups,
                         const std::vector<CVector>& factors) {
  const std::vector<int> order = flatten_order(space, groups);
  CVector x = CVector::Ones(1);
  for (const CVector& f : factors) x = kron(x, f);
  if (x.size() != space.total_dim()) throw std::invalid_argument("assemble_product: factor sizes do not match");
  std::vector<int> inverse(order.size());
  for (std::size_t t = 0; t < order.size(); ++t) inverse[order[t]] = static_cast<int>(t);
  return permute_parties(x, space.restricted(order), inverse);
}

}  // namespace gesq
