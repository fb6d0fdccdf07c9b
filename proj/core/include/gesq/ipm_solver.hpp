#pragma once

// Dense primal-dual interior-point method for
//
//   minimize c^T y + c0  s.t.  S = F0 + Σ_i y_i F_i ⪰ 0
//   maximize c0 - <F0, Z> s.t. <F_i, Z> = c_i, Z ⪰ 0
//
// Infeasible start, HKM search direction, Mehrotra predictor-corrector.

#include <string>
#include <vector>

#include "gesq/conic_program.hpp"

namespace gesq {

enum class SolveStatus { kOptimal, kNearOptimal, kInfeasible, kNumericalFailure };

std::string to_string(SolveStatus status);

struct IpmOptions {
  double tolerance = 1e-9;        // target relative gap and infeasibilities
  double accept_tolerance = 1e-7;  // above this the result is near-optimal
  int max_iterations = 100;
  double step_fraction = 0.95;
  bool verbose = false;
};

struct IpmResult {
  SolveStatus status = SolveStatus::kNumericalFailure;
  Eigen::VectorXd y;
  std::vector<Eigen::MatrixXd> slack;  // S per block
  std::vector<Eigen::MatrixXd> dual;   // Z per block
  double primal_objective = 0.0;
  double dual_objective = 0.0;
  double relative_gap = 0.0;
  double primal_infeasibility = 0.0;
  double dual_infeasibility = 0.0;
  int iterations = 0;
};

IpmResult solve_lmi(const Lmi& lmi, const IpmOptions& options = {});

}  // namespace gesq
