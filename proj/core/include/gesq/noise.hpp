#pragma once

// White-noise mixtures of a subspace projector and their detection thresholds.

#include <functional>
#include <string>

#include "gesq/sdp.hpp"
#include "gesq/tensor_core.hpp"

namespace gesq {

/// ρ(p) = (1 - p) P / d_G + p I / D.
class NoisyGesState {
 public:
  NoisyGesState(Subspace subspace, double p);

  const Subspace& subspace() const { return subspace_; }
  double p() const { return p_; }
  HermitianOp state() const;

 private:
  Subspace subspace_;
  double p_;
};

HermitianOp make_noisy_state(const Subspace& subspace, double p);
/// (1 - p) σ + p I / D for a state σ supported on the subspace.
HermitianOp make_noisy_state(const Subspace& subspace, const HermitianOp& sigma_on_subspace, double p);

enum class Target { kGme, kEnt };
std::string to_string(Target target);

/// tr(W ρ) for W = [(1 - ε) I - P] / [(1 - ε) D - d_G]. Negative values
/// certify entanglement of the kind ε refers to (ε = GGM for GME, ε = GM
/// for entanglement). Throws if ε >= 1 - d_G / D.
double witness_value(const Subspace& subspace, const HermitianOp& state, double epsilon);
/// Closed form of the same quantity on noisy states: [p(D - d_G)/D - ε] / [(1 - ε)D - d_G].
double witness_value_noisy(Index total_dim, Index subspace_dim, double p, double epsilon);

struct ThresholdResult {
  double p_star = 0.0;
  std::string method;
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
  double value_lo = 0.0;  // detector value at bracket_lo
  double value_hi = 0.0;  // detector value at bracket_hi
  bool detected_at_zero = true;
  bool monotone = true;
  int evaluations = 0;
};

ThresholdResult threshold_witness(const Subspace& subspace, double epsilon, Target target);

enum class Detector { kPptMixture, kFullyPptMixture, kFidelityGm, kFidelityGgm };
std::string to_string(Detector detector);

struct BisectOptions {
  double tol_p = 2e-3;
  double detection_floor = 1e-7;
  int prescan_points = 8;
  SdpOptions sdp;
};

/// Detector value on ρ(p): positive means detected.
double detector_value(const Subspace& subspace, Detector detector, double p, const SdpOptions& options = {});

/// Bisection for the largest p at which a detector still fires, after a
/// uniform pre-scan of [0, 1].
ThresholdResult threshold_bisect(const std::function<double(double)>& detector, const std::string& label,
                                 const BisectOptions& options = {});
ThresholdResult threshold_bisect(const Subspace& subspace, Detector detector, const BisectOptions& options = {});

}  // namespace gesq
