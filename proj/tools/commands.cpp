#include "commands.hpp"

#include <cmath>
#include <fstream>
#include <memory>
#include <numbers>
#include <sstream>

#include "cli_common.hpp"
#include "gesq/conic_program.hpp"
#include "gesq/exact.hpp"
#include "gesq/json_io.hpp"
#include "gesq/noise.hpp"
#include "gesq/sdp.hpp"
#include "gesq/subspaces.hpp"
#include "gesq/variational.hpp"

namespace gesq::cli {
namespace {

void add_subspace_flags(CLI::App& cmd, SubspaceArgs& s) {
  cmd.add_option("--subspace", s.label, "Subspace label: S, Q1, Q2, ASYM, WSPAN")
      ->check(CLI::IsMember({"S", "Q1", "Q2", "ASYM", "WSPAN"}));
  cmd.add_option("--N", s.n_parties, "Number of parties")->check(CLI::Range(2, 12));
  cmd.add_option("--d", s.d, "Local dimension")->check(CLI::Range(2, 64));
  cmd.add_option("--theta", s.theta, "Angle in radians, or a pi expression such as pi/2");
}

nlohmann::json sdp_json(const SdpSolution& sol) {
  return {{"status", to_string(sol.status)},
          {"iterations", sol.iterations},
          {"duality_gap", sol.duality_gap},
          {"min_psd_eigenvalue", sol.audit.min_psd_eigenvalue},
          {"max_equality_residual", sol.audit.max_equality_residual}};
}

nlohmann::json sdp_settings(const SdpOptions& o) {
  return {{"tolerance", o.ipm.tolerance},
          {"accept_tolerance", o.ipm.accept_tolerance},
          {"max_iterations", o.ipm.max_iterations},
          {"audit_tolerance", o.audit_tolerance}};
}

nlohmann::json program_json(const std::string& name, const ConicProgram& program) {
  return {{"name", name}, {"lmi", lmi_to_json(compile(program))}};
}

void dump_programs(const std::string& path, const nlohmann::json& programs) {
  if (path.empty()) return;
  // Compact: programs can be large.
  const nlohmann::json doc = {{"format", "gesq.programs/1"}, {"programs", programs}};
  write_output(path, doc.dump());
}

std::string cut_label(const Bipartition& cut) {
  std::string s;
  for (int p : cut.side()) s += std::to_string(p);
  s += "|";
  for (int p : cut.complement()) s += std::to_string(p);
  return s;
}

// ---------------------------------------------------------------- construct

struct ConstructOptions {
  SubspaceArgs sub;
  std::string out;
  bool with_basis = true;
};

int run_construct(const ConstructOptions& o) {
  const Subspace s = o.sub.build();
  nlohmann::json j = o.with_basis ? to_json(s) : nlohmann::json::object();
  j["report"] = {{"dim", s.dim()}, {"total_dim", s.space().total_dim()}, {"parameters", o.sub.to_json()}};
  write_output(o.out, pretty(j));
  return kExitOk;
}

// ------------------------------------------------------------------ measure

struct MeasureOptions {
  SubspaceArgs sub;
  std::string method = "seesaw";
  std::string target = "GM";
  int restarts = 200;
  std::uint64_t seed = 0;
  double epsilon = 1e-10;
  int jobs = 1;
  double time_limit = 0.0;
  double p = 0.0;
  std::string out;
  std::string dump_program;
};

nlohmann::json measure_exact(const MeasureOptions& o, const Subspace&) {
  const std::string& label = o.sub.label;
  const double theta = o.sub.theta_value();
  if (label == "S" && o.target == "GGM") {
    return {{"value", ggm_ges_exact(o.sub.n_parties, o.sub.d, theta).value}, {"formula", "sin^2 form (GGM of S)"}};
  }
  if (label == "S" && o.target == "GM" && o.sub.n_parties == 2) {
    const CesValue v = gm_ces_exact(o.sub.d, theta);
    return {{"value", v.value}, {"formula", "1 - lambda_max (2 x d)"}, {"single_vector", v.single_vector}};
  }
  if (label == "ASYM") {
    const Rational r = o.target == "GM" ? antisym_gm(o.sub.n_parties) : antisym_ggm(o.sub.n_parties);
    return {{"value", boost::rational_cast<double>(r)}, {"exact", to_string(r)}, {"formula", "antisymmetric"}};
  }
  throw UsageError("no closed form for target " + o.target + " on subspace " + label +
                   (label == "S" ? " with N > 2 (use seesaw or sdp)" : ""));
}

nlohmann::json measure_seesaw(const MeasureOptions& o, const Subspace& s) {
  SeesawConfig cfg;
  cfg.restarts = o.restarts;
  cfg.rng_seed = o.seed;
  cfg.epsilon = o.epsilon;
  cfg.jobs = o.jobs;
  cfg.time_limit_seconds = o.time_limit;
  auto result_json = [](const SeesawResult& r) {
    nlohmann::json factors = nlohmann::json::array();
    for (const CVector& f : r.factors) factors.push_back(vector_json(f));
    return nlohmann::json{{"entanglement", r.entanglement}, {"overlap", r.overlap},
                          {"groups", r.groups},             {"factors", factors},
                          {"sweeps", r.sweeps_used},        {"converged", r.converged},
                          {"monotone", r.monotone},         {"best_restart", r.best_restart},
                          {"restarts_run", r.restarts_run}};
  };
  nlohmann::json rec;
  if (o.target == "GM") {
    const SeesawResult r = seesaw_gm(s, cfg);
    rec = result_json(r);
    rec["value"] = r.entanglement;
  } else {
    const CutScan scan = ggm_via_cuts(s, cfg);
    nlohmann::json cuts = nlohmann::json::array();
    for (const auto& [cut, r] : scan.per_cut) {
      nlohmann::json c = result_json(r);
      c["cut"] = cut_label(cut);
      cuts.push_back(std::move(c));
    }
    rec["value"] = scan.value;
    rec["cut"] = scan.cut ? cut_label(*scan.cut) : "";
    rec["per_cut"] = std::move(cuts);
  }
  rec["tolerances"] = {{"sweep_epsilon", cfg.epsilon}, {"max_sweeps", cfg.max_sweeps}};
  rec["restarts"] = cfg.restarts;
  rec["seed"] = cfg.rng_seed;
  return rec;
}

nlohmann::json measure_sdp(const MeasureOptions& o, const Subspace& s, const SdpOptions& sdp) {
  const auto cuts = Bipartition::all(s.space().parties());
  nlohmann::json rec;
  if (o.target == "GM") {
    if (!o.dump_program.empty()) {
      dump_programs(o.dump_program,
                    nlohmann::json::array({program_json("ppt-relaxation", ppt_relaxation_program(s, cuts))}));
    }
    const BoundResult b = gm_lower_bound(s, sdp);
    rec = {{"value", b.value}, {"solver", sdp_json(b.solution)}};
  } else {
    if (!o.dump_program.empty()) {
      nlohmann::json programs = nlohmann::json::array();
      for (const Bipartition& cut : cuts) {
        programs.push_back(program_json("ppt-relaxation " + cut_label(cut), ppt_relaxation_program(s, {cut})));
      }
      dump_programs(o.dump_program, programs);
    }
    const GgmBound g = ggm_lower_bound(s, sdp);
    nlohmann::json per = nlohmann::json::array();
    for (const CutBound& c : g.per_cut) {
      per.push_back({{"cut", cut_label(c.cut)}, {"value", c.bound.value}, {"solver", sdp_json(c.bound.solution)}});
    }
    rec = {{"value", g.value}, {"cut", g.cut ? cut_label(*g.cut) : ""}, {"per_cut", per}};
  }
  return rec;
}

nlohmann::json measure_state(const MeasureOptions& o, const Subspace& s, const SdpOptions& sdp) {
  const HermitianOp rho = make_noisy_state(s, o.p);
  BoundResult b;
  std::string program;
  if (o.method == "pptmix") {
    // Mixtures of cut-wise PPT states bound the GME side; fully PPT
    // mixtures bound full separability.
    const bool fully = o.target == "GM";
    program = fully ? "pptmix-fully" : "pptmix";
    if (!o.dump_program.empty()) {
      dump_programs(o.dump_program, nlohmann::json::array({program_json(program, ppt_mixture_program(rho, fully))}));
    }
    b = ppt_mixture_monotone(rho, fully, sdp);
  } else {
    const bool gm = o.target == "GM";
    program = gm ? "fidelity-GM" : "fidelity-GGM";
    if (!o.dump_program.empty()) {
      const ConicProgram p = gm ? fidelity_gm_program(rho) : fidelity_ggm_program(rho);
      dump_programs(o.dump_program, nlohmann::json::array({program_json(program, p)}));
    }
    b = gm ? fidelity_gm_bound(rho, sdp) : fidelity_ggm_bound(rho, sdp);
  }
  return {{"value", b.value}, {"program", program}, {"noise_p", o.p}, {"solver", sdp_json(b.solution)}};
}

int run_measure(const MeasureOptions& o) {
  Manifest m("measure");
  m.set_seed(o.seed);
  m.parameters() = o.sub.to_json();
  m.parameters()["method"] = o.method;
  m.parameters()["target"] = o.target;
  const SdpOptions sdp;
  if (o.method == "sdp" || o.method == "pptmix" || o.method == "fidelity") m.solver() = sdp_settings(sdp);
  if (o.method == "exact" && !o.dump_program.empty()) throw UsageError("--dump-program needs an SDP method");
  if (o.method == "seesaw" && !o.dump_program.empty()) throw UsageError("--dump-program needs an SDP method");

  const Subspace s = o.sub.build();
  nlohmann::json rec;
  if (o.method == "exact") {
    rec = measure_exact(o, s);
  } else if (o.method == "seesaw") {
    rec = measure_seesaw(o, s);
  } else if (o.method == "sdp") {
    rec = measure_sdp(o, s, sdp);
  } else {
    rec = measure_state(o, s, sdp);
  }
  rec["quantity"] = "E_" + o.target;
  rec["method"] = o.method;
  rec["subspace"] = o.sub.to_json();
  rec["dim"] = s.dim();
  m.add_record(std::move(rec));
  write_output(o.out, pretty(m.finish()));
  return kExitOk;
}

// -------------------------------------------------------------------- exact

struct ExactOptions {
  std::string formula = "ggm-S";
  int n_parties = 3;
  int d = 3;
  std::string theta = "pi/2";
  std::string epsilon = "1/4";
  long long total_dim = 0;
  long long subspace_dim = 0;
  std::string out;
};

Rational parse_rational(const std::string& text) {
  const auto slash = text.find('/');
  try {
    if (slash == std::string::npos) {
      // Decimal input: exact only for terminating decimals with <= 15 digits.
      const auto dot = text.find('.');
      if (dot == std::string::npos) return Rational(std::stoll(text));
      const std::string digits = text.substr(0, dot) + text.substr(dot + 1);
      const int places = static_cast<int>(text.size() - dot - 1);
      if (places > 15) throw UsageError("too many decimals in '" + text + "'");
      std::int64_t den = 1;
      for (int i = 0; i < places; ++i) den *= 10;
      return Rational(std::stoll(digits), den);
    }
    return Rational(std::stoll(text.substr(0, slash)), std::stoll(text.substr(slash + 1)));
  } catch (const std::logic_error&) {
    throw UsageError("cannot parse rational '" + text + "'");
  }
}

int run_exact(const ExactOptions& o) {
  Manifest m("exact");
  nlohmann::json inputs = {{"N", o.n_parties}, {"d", o.d}};
  nlohmann::json rec = {{"formula", o.formula}};
  const double theta = parse_angle(o.theta);
  if (o.formula == "ggm-S") {
    inputs["theta"] = theta;
    rec["value"] = ggm_ges_exact(o.n_parties, o.d, theta).value;
  } else if (o.formula == "gm-ces") {
    inputs = {{"d", o.d}, {"theta", theta}};
    const CesValue v = gm_ces_exact(o.d, theta);
    rec["value"] = v.value;
    rec["single_vector"] = v.single_vector;
  } else if (o.formula == "lambda-max") {
    inputs = {{"d", o.d}, {"theta", theta}};
    rec["value"] = ges_lambda_max(o.d, theta);
  } else if (o.formula == "gm-bound-S") {
    rec["value"] = gm_upper_bound_S(o.n_parties, o.d);
    if (const auto r = gm_upper_bound_S_exact(o.n_parties, o.d)) rec["exact"] = to_string(*r);
  } else if (o.formula == "antisym-gm" || o.formula == "antisym-ggm") {
    inputs = {{"N", o.n_parties}};
    const Rational r = o.formula == "antisym-gm" ? antisym_gm(o.n_parties) : antisym_ggm(o.n_parties);
    rec["value"] = boost::rational_cast<double>(r);
    rec["exact"] = to_string(r);
  } else if (o.formula == "witness") {
    if (o.total_dim <= 0 || o.subspace_dim <= 0) throw UsageError("witness needs --D and --dim");
    const Rational eps = parse_rational(o.epsilon);
    inputs = {{"D", o.total_dim}, {"dim", o.subspace_dim}, {"epsilon", o.epsilon}};
    const Rational r = witness_threshold_exact(o.total_dim, o.subspace_dim, eps);
    rec["value"] = boost::rational_cast<double>(r);
    rec["exact"] = to_string(r);
  } else {
    throw UsageError("unknown formula '" + o.formula + "'");
  }
  rec["inputs"] = inputs;
  m.add_record(std::move(rec));
  write_output(o.out, pretty(m.finish()));
  return kExitOk;
}

// ------------------------------------------------------------------ figure1

struct Figure1Options {
  int points = 99;
  int d_min = 2;
  int d_max = 7;
  std::string out;
};

int run_figure1(const Figure1Options& o) {
  if (o.d_min < 2 || o.d_max < o.d_min) throw UsageError("need 2 <= --d-min <= --d-max");
  std::ostringstream csv;
  csv << "theta";
  for (int d = o.d_min; d <= o.d_max; ++d) csv << ",E_GM_d" << d;
  csv << "\r\n";
  for (int k = 1; k <= o.points; ++k) {
    const double theta = std::numbers::pi * k / (o.points + 1);
    csv << csv_number(theta);
    for (int d = o.d_min; d <= o.d_max; ++d) csv << "," << csv_number(gm_ces_exact(d, theta).value);
    csv << "\r\n";
  }
  write_output(o.out, csv.str());
  return kExitOk;
}

// ---------------------------------------------------------- noise-threshold

struct NoiseOptions {
  SubspaceArgs sub;
  std::string method = "witness";
  std::string target = "gme";
  double tol = 2e-3;
  double floor = 1e-7;
  int prescan = 8;
  double epsilon = -1.0;  // witness only; negative means compute it
  int restarts = 200;
  std::uint64_t seed = 0;
  std::string out;
};

nlohmann::json threshold_json(const ThresholdResult& r) {
  return {{"p_star", r.p_star},         {"method", r.method},
          {"bracket", {r.bracket_lo, r.bracket_hi}}, {"values", {r.value_lo, r.value_hi}},
          {"detected_at_zero", r.detected_at_zero}, {"monotone", r.monotone},
          {"evaluations", r.evaluations}};
}

int run_noise(const NoiseOptions& o) {
  Manifest m("noise-threshold");
  m.set_seed(o.seed);
  m.parameters() = o.sub.to_json();
  m.parameters()["method"] = o.method;
  m.parameters()["target"] = o.target;
  const Subspace s = o.sub.build();
  const bool gme = o.target == "gme";
  nlohmann::json rec;
  if (o.method == "witness") {
    double eps = o.epsilon;
    std::string source = "given";
    if (eps < 0.0) {
      SeesawConfig cfg;
      cfg.restarts = o.restarts;
      cfg.rng_seed = o.seed;
      if (gme && o.sub.label == "S") {
        eps = ggm_ges_exact(o.sub.n_parties, o.sub.d, o.sub.theta_value()).value;
        source = "closed form";
      } else if (gme) {
        eps = ggm_via_cuts(s, cfg).value;
        source = "seesaw";
      } else {
        eps = seesaw_gm(s, cfg).entanglement;
        source = "seesaw";
      }
    }
    rec = threshold_json(threshold_witness(s, eps, gme ? Target::kGme : Target::kEnt));
    rec["epsilon"] = eps;
    rec["epsilon_source"] = source;
  } else {
    BisectOptions b;
    b.tol_p = o.tol;
    b.detection_floor = o.floor;
    b.prescan_points = o.prescan;
    Detector det;
    if (o.method == "pptmix") {
      det = gme ? Detector::kPptMixture : Detector::kFullyPptMixture;
    } else {
      det = gme ? Detector::kFidelityGgm : Detector::kFidelityGm;
    }
    m.solver() = sdp_settings(b.sdp);
    rec = threshold_json(threshold_bisect(s, det, b));
    rec["tolerances"] = {{"tol_p", b.tol_p}, {"detection_floor", b.detection_floor}, {"prescan", b.prescan_points}};
  }
  rec["target"] = o.target;
  rec["subspace"] = o.sub.to_json();
  m.add_record(std::move(rec));
  write_output(o.out, pretty(m.finish()));
  return kExitOk;
}

// ------------------------------------------------------------------- verify

struct VerifyOptions {
  std::string which = "all";
  int d_max = 4;
  std::string out;
};

int run_verify(const VerifyOptions& o) {
  Manifest m("verify");
  bool ok = true;
  if (o.which == "equivalence" || o.which == "all") {
    for (int d = 2; d <= o.d_max; ++d) {
      const EquivalenceReport r = verify_local_unitary_equivalence(d);
      ok = ok && r.equivalent;
      m.add_record({{"check", "local-unitary equivalence"},
                    {"d", d},
                    {"passed", r.equivalent},
                    {"projector_distance", r.projector_distance},
                    {"dim", r.dim}});
    }
  }
  if (o.which == "ppt-state" || o.which == "all") {
    const PptStateReport r = ppt_state_outside_s();
    double min_pt = 1.0;
    for (double e : r.min_pt_eigenvalues) min_pt = std::min(min_pt, e);
    const bool passed = min_pt >= -1e-10 && r.complement_exact == Rational(239371, 568000);
    ok = ok && passed;
    m.add_record({{"check", "PPT state off the subspace"},
                  {"passed", passed},
                  {"min_pt_eigenvalues", r.min_pt_eigenvalues},
                  {"trace_P_rho", to_string(r.overlap_exact)},
                  {"trace_complement_rho", to_string(r.complement_exact)},
                  {"trace_complement_rho_double", r.complement}});
  }
  write_output(o.out, pretty(m.finish()));
  return ok ? kExitOk : kExitTolerance;
}

}  // namespace

Runner add_construct(CLI::App& app) {
  auto o = std::make_shared<ConstructOptions>();
  CLI::App* cmd = app.add_subcommand("construct", "Build a subspace and write its basis as JSON");
  add_subspace_flags(*cmd, o->sub);
  cmd->add_option("--out", o->out, "Output path (default stdout)");
  cmd->add_flag("!--no-basis", o->with_basis, "Only write the dimension report");
  return [o] { return run_construct(*o); };
}

Runner add_measure(CLI::App& app) {
  auto o = std::make_shared<MeasureOptions>();
  o->seed = default_seed();
  CLI::App* cmd = app.add_subcommand("measure", "Compute the entanglement of a subspace or its normalized projector");
  add_subspace_flags(*cmd, o->sub);
  cmd->add_option("--method", o->method, "exact, seesaw, sdp, pptmix or fidelity")
      ->check(CLI::IsMember({"exact", "seesaw", "sdp", "pptmix", "fidelity"}));
  cmd->add_option("--target", o->target, "GM or GGM")->check(CLI::IsMember({"GM", "GGM"}));
  cmd->add_option("--restarts", o->restarts, "Seesaw restarts")->check(CLI::PositiveNumber);
  cmd->add_option("--seed", o->seed, "Seesaw seed (default GESQ_SEED or 0)");
  cmd->add_option("--epsilon", o->epsilon, "Seesaw stopping gain per sweep")->check(CLI::PositiveNumber);
  cmd->add_option("--jobs", o->jobs, "Worker threads for seesaw restarts")->check(CLI::PositiveNumber);
  cmd->add_option("--time-limit", o->time_limit, "Seesaw wall-clock limit in seconds (0 = none)");
  cmd->add_option("--p", o->p, "White-noise weight for pptmix and fidelity")->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--dump-program", o->dump_program, "Write the compiled conic program(s) as JSON");
  cmd->add_option("--out", o->out, "Output path (default stdout)");
  return [o] { return run_measure(*o); };
}

Runner add_exact(CLI::App& app) {
  auto o = std::make_shared<ExactOptions>();
  CLI::App* cmd = app.add_subcommand("exact", "Evaluate a closed-form expression");
  cmd->add_option("--formula", o->formula, "ggm-S, gm-ces, lambda-max, gm-bound-S, antisym-gm, antisym-ggm, witness")
      ->check(CLI::IsMember({"ggm-S", "gm-ces", "lambda-max", "gm-bound-S", "antisym-gm", "antisym-ggm", "witness"}));
  cmd->add_option("--N", o->n_parties, "Number of parties");
  cmd->add_option("--d", o->d, "Local dimension");
  cmd->add_option("--theta", o->theta, "Angle in radians or a pi expression");
  cmd->add_option("--epsilon", o->epsilon, "Witness epsilon as a fraction or terminating decimal");
  cmd->add_option("--D", o->total_dim, "Total dimension (witness)");
  cmd->add_option("--dim", o->subspace_dim, "Subspace dimension (witness)");
  cmd->add_option("--out", o->out, "Output path (default stdout)");
  return [o] { return run_exact(*o); };
}

Runner add_figure1(CLI::App& app) {
  auto o = std::make_shared<Figure1Options>();
  CLI::App* cmd = app.add_subcommand("figure1", "CSV of E_GM of the 2 x d family over a theta grid");
  cmd->add_option("--points", o->points, "Interior grid points on (0, pi)")->check(CLI::Range(1, 100000));
  cmd->add_option("--d-min", o->d_min, "Smallest d");
  cmd->add_option("--d-max", o->d_max, "Largest d");
  cmd->add_option("--out", o->out, "Output path (default stdout)");
  return [o] { return run_figure1(*o); };
}

Runner add_noise_threshold(CLI::App& app) {
  auto o = std::make_shared<NoiseOptions>();
  o->seed = default_seed();
  CLI::App* cmd = app.add_subcommand("noise-threshold", "White-noise tolerance of the normalized projector");
  add_subspace_flags(*cmd, o->sub);
  cmd->add_option("--method", o->method, "witness, pptmix or fidelity")
      ->check(CLI::IsMember({"witness", "pptmix", "fidelity"}));
  cmd->add_option("--target", o->target, "gme or ent")->check(CLI::IsMember({"gme", "ent"}));
  cmd->add_option("--tol", o->tol, "Bracket width for bisection")->check(CLI::PositiveNumber);
  cmd->add_option("--floor", o->floor, "Detector values at or below this count as not detected");
  cmd->add_option("--prescan", o->prescan, "Prescan points on [0, 1]")->check(CLI::Range(2, 1000));
  cmd->add_option("--epsilon", o->epsilon, "Witness epsilon (default: computed)");
  cmd->add_option("--restarts", o->restarts, "Seesaw restarts when epsilon is computed")->check(CLI::PositiveNumber);
  cmd->add_option("--seed", o->seed, "Seesaw seed (default GESQ_SEED or 0)");
  cmd->add_option("--out", o->out, "Output path (default stdout)");
  return [o] { return run_noise(*o); };
}

Runner add_verify(CLI::App& app) {
  auto o = std::make_shared<VerifyOptions>();
  CLI::App* cmd = app.add_subcommand("verify", "Check the local-unitary equivalence and the PPT counterexample");
  cmd->add_option("--check", o->which, "equivalence, ppt-state or all")
      ->check(CLI::IsMember({"equivalence", "ppt-state", "all"}));
  cmd->add_option("--d-max", o->d_max, "Largest d for the equivalence check")->check(CLI::Range(2, 12));
  cmd->add_option("--out", o->out, "Output path (default stdout)");
  return [o] { return run_verify(*o); };
}

}  // namespace gesq::cli
