#pragma once

// Seesaw maximization of <x|P|x> over product vectors x.
//
// The parties are split into groups; x is a product over groups. The fully
// product case (GM) uses one group per party, a bipartition K|K̄ uses two.
// Each step contracts P with every factor but one and replaces that factor
// by the top eigenvector of the contraction, so the overlap never decreases.

#include <cstdint>
#include <optional>
#include <vector>

#include "gesq/tensor_core.hpp"

namespace gesq {

struct SeesawConfig {
  double epsilon = 1e-10;  // stop when a whole sweep gains less than this
  int max_sweeps = 10000;
  int restarts = 200;
  std::uint64_t rng_seed = 0;
  int jobs = 1;                     // worker threads for independent restarts
  double time_limit_seconds = 0.0;  // 0 disables; later restarts are skipped

  void validate() const;
};

struct SeesawResult {
  double overlap = 0.0;
  double entanglement = 1.0;
  std::vector<std::vector<int>> groups;  // parties making up each factor
  std::vector<CVector> factors;          // one unit vector per group
  int sweeps_used = 0;
  bool converged = false;
  bool monotone = true;  // no step decreased the overlap (all restarts)
  int best_restart = -1;
  int restarts_run = 0;
  std::vector<double> restart_overlaps;
};

SeesawResult seesaw_gm(const Subspace& subspace, const SeesawConfig& cfg);
SeesawResult seesaw_gm_bipartition(const Subspace& subspace, const Bipartition& cut,
                                   const SeesawConfig& cfg);
/// Seesaw over an arbitrary grouping of the parties (every party exactly once).
SeesawResult seesaw_grouped(const Subspace& subspace, const std::vector<std::vector<int>>& groups,
                            const SeesawConfig& cfg);

struct CutScan {
  double value = 1.0;
  std::optional<Bipartition> cut;
  std::vector<std::pair<Bipartition, SeesawResult>> per_cut;
};

/// min over all canonical cuts of the bipartite GM.
CutScan ggm_via_cuts(const Subspace& subspace, const SeesawConfig& cfg);

/// Contraction of P with every factor except `active`; its quadratic form in
/// the active factor is the overlap.
CMatrix group_contraction(const Subspace& subspace, const std::vector<std::vector<int>>& groups,
                          const std::vector<CVector>& factors, int active);

/// Embeds per-group factors as a single vector in the subspace's own party order.
CVector assemble_product(const HilbertSpace& space, const std::vector<std::vector<int>>& groups,
                         const std::vector<CVector>& factors);

}  // namespace gesq
