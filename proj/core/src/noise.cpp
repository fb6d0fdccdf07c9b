#include "gesq/noise.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "gesq/exact.hpp"

namespace gesq {

NoisyGesState::NoisyGesState(Subspace subspace, double p) : subspace_(std::move(subspace)), p_(p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("NoisyGesState: p must lie in [0, 1]");
}

HermitianOp NoisyGesState::state() const { return make_noisy_state(subspace_, p_); }

HermitianOp make_noisy_state(const Subspace& subspace, double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("make_noisy_state: p must lie in [0, 1]");
  const Index n = subspace.space().total_dim();
  const CMatrix rho = (1.0 - p) / static_cast<double>(subspace.dim()) * subspace.projector().matrix() +
                      p / static_cast<double>(n) * CMatrix::Identity(n, n);
  return HermitianOp(subspace.space(), rho);
}

HermitianOp make_noisy_state(const Subspace& subspace, const HermitianOp& sigma, double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("make_noisy_state: p must lie in [0, 1]");
  if (!(sigma.space() == subspace.space())) throw std::invalid_argument("make_noisy_state: space mismatch");
  const CMatrix& s = sigma.matrix();
  const CMatrix& proj = subspace.projector().matrix();
  if ((proj * s * proj - s).cwiseAbs().maxCoeff() > 1e-9) {
    throw std::invalid_argument("make_noisy_state: sigma is not supported on the subspace");
  }
  const Index n = subspace.space().total_dim();
  return HermitianOp(subspace.space(), (1.0 - p) * s + p / static_cast<double>(n) * CMatrix::Identity(n, n));
}

std::string to_string(Target target) { return target == Target::kGme ? "gme" : "ent"; }

namespace {

double witness_denominator(Index total_dim, Index subspace_dim, double epsilon) {
  const double den = (1.0 - epsilon) * static_cast<double>(total_dim) - static_cast<double>(subspace_dim);
  if (!(epsilon >= 0.0) || den <= 0.0) {
    throw std::invalid_argument("witness: need 0 <= epsilon < 1 - d_G / D");
  }
  return den;
}

}  // namespace

double witness_value(const Subspace& subspace, const HermitianOp& state, double epsilon) {
  const Index n = subspace.space().total_dim();
  const double den = witness_denominator(n, subspace.dim(), epsilon);
  if (!(state.space() == subspace.space())) throw std::invalid_argument("witness_value: space mismatch");
  const Complex tr_p = (subspace.projector().matrix().cwiseProduct(state.matrix().transpose())).sum();
  return ((1.0 - epsilon) * state.trace() - tr_p.real()) / den;
}

double witness_value_noisy(Index total_dim, Index subspace_dim, double p, double epsilon) {
  const double den = witness_denominator(total_dim, subspace_dim, epsilon);
  const double d = static_cast<double>(total_dim);
  return (p * (d - static_cast<double>(subspace_dim)) / d - epsilon) / den;
}

ThresholdResult threshold_witness(const Subspace& subspace, double epsilon, Target target) {
  const Index n = subspace.space().total_dim();
  witness_denominator(n, subspace.dim(), epsilon);
  ThresholdResult r;
  r.method = "witness-" + to_string(target);
  r.p_star = witness_threshold(n, subspace.dim(), epsilon);
  r.bracket_lo = r.bracket_hi = r.p_star;
  r.value_lo = r.value_hi = -witness_value_noisy(n, subspace.dim(), r.p_star, epsilon);
  r.detected_at_zero = true;
  return r;
}

std::string to_string(Detector detector) {
  switch (detector) {
    case Detector::kPptMixture:
      return "pptmix";
    case Detector::kFullyPptMixture:
      return "pptmix-fully";
    case Detector::kFidelityGm:
      return "fidelity-GM";
    case Detector::kFidelityGgm:
      return "fidelity-GGM";
  }
  return "unknown";
}

double detector_value(const Subspace& subspace, Detector detector, double p, const SdpOptions& options) {
  const HermitianOp rho = make_noisy_state(subspace, p);
  switch (detector) {
    case Detector::kPptMixture:
      return ppt_mixture_monotone(rho, false, options).value;
    case Detector::kFullyPptMixture:
      return ppt_mixture_monotone(rho, true, options).value;
    case Detector::kFidelityGm:
      return fidelity_gm_bound(rho, options).value;
    case Detector::kFidelityGgm:
      return fidelity_ggm_bound(rho, options).value;
  }
  throw std::invalid_argument("detector_value: unknown detector");
}

ThresholdResult threshold_bisect(const std::function<double(double)>& detector, const std::string& label,
                                 const BisectOptions& options) {
  if (options.prescan_points < 2) throw std::invalid_argument("threshold_bisect: need at least two pre-scan points");
  if (!(options.tol_p > 0.0)) throw std::invalid_argument("threshold_bisect: tolerance must be positive");
  ThresholdResult r;
  r.method = label;
  auto eval = [&](double p) {
    ++r.evaluations;
    return detector(p);
  };
  const double floor = options.detection_floor;

  std::vector<double> ps, vals;
  for (int k = 0; k < options.prescan_points; ++k) {
    ps.push_back(static_cast<double>(k) / (options.prescan_points - 1));
    vals.push_back(eval(ps.back()));
  }
  if (vals[0] <= floor) {
    r.detected_at_zero = false;
    r.p_star = 0.0;
    r.value_lo = r.value_hi = vals[0];
    return r;
  }
  std::size_t first_off = ps.size();
  for (std::size_t k = 0; k < ps.size(); ++k) {
    if (vals[k] <= floor) {
      first_off = k;
      break;
    }
  }
  for (std::size_t k = first_off; k < ps.size(); ++k) {
    if (vals[k] > floor) r.monotone = false;
  }
  if (first_off == ps.size()) {
    r.p_star = r.bracket_lo = r.bracket_hi = 1.0;
    r.value_lo = r.value_hi = vals.back();
    r.monotone = false;
    return r;
  }
  double lo = ps[first_off - 1], hi = ps[first_off];
  double vlo = vals[first_off - 1], vhi = vals[first_off];
  while (hi - lo > options.tol_p) {
    const double mid = 0.5 * (lo + hi);
    const double v = eval(mid);
    if (v > floor) {
      lo = mid;
      vlo = v;
    } else {
      hi = mid;
      vhi = v;
    }
  }
  r.bracket_lo = lo;
  r.bracket_hi = hi;
  r.value_lo = vlo;
  r.value_hi = vhi;
  r.p_star = 0.5 * (lo + hi);
  return r;
}

ThresholdResult threshold_bisect(const Subspace& subspace, Detector detector, const BisectOptions& options) {
  return threshold_bisect([&](double p) { return detector_value(subspace, detector, p, options.sdp); },
                          to_string(detector), options);
}

}  // namespace gesq
