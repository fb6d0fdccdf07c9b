// `reproduce`: recompute every cell of a bundled reference table and report
// the per-cell difference against the printed value.

#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <sstream>
#include <thread>

#include "cli_common.hpp"
#include "commands.hpp"
#include "gesq/conic_program.hpp"
#include "gesq/exact.hpp"
#include "gesq/noise.hpp"
#include "gesq/sdp.hpp"
#include "gesq/subspaces.hpp"
#include "gesq/variational.hpp"
#include "reference_data.hpp"

namespace gesq::cli {
namespace {

struct RefCell {
  std::string table, row, column, subspace;
  int n_parties = 3;
  int d = 3;
  std::string theta, quantity, text, source;
  double value = 0.0;
  double half_unit = 0.0;  // half a unit in the last printed digit
};

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        field.push_back('"');
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        field.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(std::move(field));
      field.clear();
    } else if (c != '\r') {
      field.push_back(c);
    }
  }
  out.push_back(std::move(field));
  return out;
}

// Value and rounding half-unit of a printed number: "0.25000", "4.8023e-3",
// "6e-5", "31/72" (exact) or an integer (exact).
void parse_printed(RefCell& cell) {
  const std::string& t = cell.text;
  if (const auto slash = t.find('/'); slash != std::string::npos) {
    cell.value = std::stod(t.substr(0, slash)) / std::stod(t.substr(slash + 1));
    cell.half_unit = 0.0;
    return;
  }
  cell.value = std::stod(t);
  std::string mantissa = t;
  int exponent = 0;
  if (const auto e = t.find_first_of("eE"); e != std::string::npos) {
    mantissa = t.substr(0, e);
    exponent = std::stoi(t.substr(e + 1));
  }
  const auto dot = mantissa.find('.');
  const int places = dot == std::string::npos ? 0 : static_cast<int>(mantissa.size() - dot - 1);
  const bool integer = dot == std::string::npos && exponent == 0;
  cell.half_unit = integer ? 0.0 : 0.5 * std::pow(10.0, exponent - places);
}

std::vector<RefCell> parse_reference(const std::string& csv) {
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  const std::vector<std::string> header = split_csv_line(line);
  const std::vector<std::string> expected = {"table", "row",   "column",   "subspace", "N",
                                             "d",     "theta", "quantity", "value",    "source"};
  if (header != expected) throw UsageError("reference CSV: unexpected header");
  std::vector<RefCell> cells;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    const std::vector<std::string> f = split_csv_line(line);
    if (f.size() != expected.size()) throw UsageError("reference CSV: wrong field count in '" + line + "'");
    RefCell c;
    c.table = f[0];
    c.row = f[1];
    c.column = f[2];
    c.subspace = f[3];
    c.n_parties = std::stoi(f[4]);
    c.d = std::stoi(f[5]);
    c.theta = f[6];
    c.quantity = f[7];
    c.text = f[8];
    c.source = f[9];
    parse_printed(c);
    cells.push_back(std::move(c));
  }
  return cells;
}

std::string family_of(const std::string& q) {
  if (q == "dim" || q == "ggm-exact" || q == "gm-bound" || q == "gm-ces") return "exact";
  if (q.ends_with("-seesaw")) return "seesaw";
  if (q.ends_with("-sdp")) return "sdp";
  if (q.starts_with("pptmix") || q == "p-pptmix") return "pptmix";
  if (q.starts_with("fidelity") || q.starts_with("p-fidelity")) return "fidelity";
  if (q.starts_with("p-witness")) return "witness";
  throw UsageError("reference CSV: unknown quantity '" + q + "'");
}

bool needs_sdp(const std::string& family) { return family == "sdp" || family == "pptmix" || family == "fidelity"; }

struct ReproduceOptions {
  std::string table;
  bool fig1 = false;
  std::string methods;
  std::string reference;
  std::string out;
  int max_d = 128;
  int max_params = 12000;
  int max_restarts = 200;
  double time_limit = 0.0;
  double tol_p = 2e-3;
  int jobs = 1;
  std::uint64_t seed = 0;
};

struct Value {
  double v = 0.0;
  nlohmann::json info = nlohmann::json::object();
};

class SkipCell : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Computes and memoizes quantities; safe to share across workers.
class Engine {
 public:
  explicit Engine(const ReproduceOptions& o) : o_(o) {}

  Value get(const std::string& quantity, const SubspaceArgs& a) {
    const std::string key = quantity + "|" + a.label + "|" + std::to_string(a.n_parties) + "|" +
                            std::to_string(a.d) + "|" + a.theta;
    std::shared_future<Value> fut;
    std::shared_ptr<std::promise<Value>> owner;
    {
      std::lock_guard lock(mu_);
      auto it = cache_.find(key);
      if (it == cache_.end()) {
        owner = std::make_shared<std::promise<Value>>();
        fut = owner->get_future().share();
        cache_.emplace(key, fut);
      } else {
        fut = it->second;
      }
    }
    if (owner) {
      try {
        owner->set_value(compute(quantity, a));
      } catch (...) {
        owner->set_exception(std::current_exception());
      }
    }
    return fut.get();
  }

  /// Throws SkipCell when the SDP behind `quantity` is over budget.
  void check_budget(const std::string& quantity, const SubspaceArgs& a) {
    if (!needs_sdp(family_of(quantity))) return;
    const Subspace s = subspace(a);
    if (s.space().total_dim() > o_.max_d) {
      throw SkipCell("D = " + std::to_string(s.space().total_dim()) + " > --max-D");
    }
    const ConicProgram program = representative_program(quantity, s);
    const int m = compile(program).lmi.m;
    if (m > o_.max_params) throw SkipCell(std::to_string(m) + " parameters > --max-params");
  }

 private:
  Subspace subspace(const SubspaceArgs& a) {
    std::lock_guard lock(sub_mu_);
    const std::string key = a.label + "|" + std::to_string(a.n_parties) + "|" + std::to_string(a.d) + "|" + a.theta;
    auto it = subspaces_.find(key);
    if (it == subspaces_.end()) it = subspaces_.emplace(key, a.build()).first;
    return it->second;
  }

  ConicProgram representative_program(const std::string& q, const Subspace& s) {
    const auto cuts = Bipartition::all(s.space().parties());
    if (q == "gm-sdp") return ppt_relaxation_program(s, cuts);
    if (q == "ggm-sdp") return ppt_relaxation_program(s, {cuts.front()});
    const HermitianOp rho = make_noisy_state(s, 0.0);
    if (q == "pptmix" || q == "p-pptmix") return ppt_mixture_program(rho, false);
    if (q == "pptmix-fully") return ppt_mixture_program(rho, true);
    if (q == "fidelity-gm" || q == "p-fidelity-ent") return fidelity_gm_program(rho);
    return fidelity_ggm_program(rho);
  }

  SeesawConfig seesaw_config() const {
    SeesawConfig c;
    c.restarts = o_.max_restarts;
    c.rng_seed = o_.seed;
    return c;
  }

  static nlohmann::json solver_info(const SdpSolution& sol) {
    return {{"status", to_string(sol.status)}, {"iterations", sol.iterations}, {"duality_gap", sol.duality_gap}};
  }

  static nlohmann::json threshold_info(const ThresholdResult& r) {
    return {{"bracket", {r.bracket_lo, r.bracket_hi}},
            {"detected_at_zero", r.detected_at_zero},
            {"monotone", r.monotone},
            {"evaluations", r.evaluations}};
  }

  Value compute(const std::string& q, const SubspaceArgs& a) {
    const double theta = a.theta_value();
    if (q == "ggm-exact") return {ggm_ges_exact(a.n_parties, a.d, theta).value};
    if (q == "gm-ces") return {gm_ces_exact(a.d, theta).value};
    if (q == "gm-bound") {
      Value v{gm_upper_bound_S(a.n_parties, a.d)};
      if (const auto r = gm_upper_bound_S_exact(a.n_parties, a.d)) v.info["exact"] = to_string(*r);
      return v;
    }
    const Subspace s = subspace(a);
    if (q == "dim") return {static_cast<double>(s.dim())};
    if (q == "gm-seesaw") {
      const SeesawResult r = seesaw_gm(s, seesaw_config());
      return {r.entanglement, {{"restarts", r.restarts_run}, {"converged", r.converged}}};
    }
    if (q == "ggm-seesaw") {
      const CutScan scan = ggm_via_cuts(s, seesaw_config());
      return {scan.value, {{"restarts", o_.max_restarts}}};
    }
    if (q == "gm-sdp") {
      const BoundResult b = gm_lower_bound(s);
      return {b.value, solver_info(b.solution)};
    }
    if (q == "ggm-sdp") return {ggm_lower_bound(s).value};
    const HermitianOp rho = make_noisy_state(s, 0.0);
    if (q == "pptmix" || q == "pptmix-fully") {
      const BoundResult b = ppt_mixture_monotone(rho, q == "pptmix-fully");
      return {b.value, solver_info(b.solution)};
    }
    if (q == "fidelity-gm" || q == "fidelity-ggm") {
      const BoundResult b = q == "fidelity-gm" ? fidelity_gm_bound(rho) : fidelity_ggm_bound(rho);
      return {b.value, solver_info(b.solution)};
    }
    if (q == "p-witness-gme" || q == "p-witness-ent") {
      const bool gme = q == "p-witness-gme";
      std::string source = gme ? (a.label == "S" ? "ggm-exact" : "ggm-seesaw") : "gm-seesaw";
      const double eps = get(source, a).v;
      const ThresholdResult r = threshold_witness(s, eps, gme ? Target::kGme : Target::kEnt);
      return {r.p_star, {{"epsilon", eps}, {"epsilon_source", source}}};
    }
    BisectOptions b;
    b.tol_p = o_.tol_p;
    Detector det = Detector::kPptMixture;
    if (q == "p-fidelity-gme") det = Detector::kFidelityGgm;
    if (q == "p-fidelity-ent") det = Detector::kFidelityGm;
    const ThresholdResult r = threshold_bisect(s, det, b);
    return {r.p_star, threshold_info(r)};
  }

  const ReproduceOptions& o_;
  std::mutex mu_;
  std::map<std::string, std::shared_future<Value>> cache_;
  std::mutex sub_mu_;
  std::map<std::string, Subspace> subspaces_;
};

struct CellResult {
  std::string status = "pending";  // ok, exceeds, skipped, failed, solver-failure
  double value = std::nan("");
  double diff = std::nan("");
  double tolerance = 0.0;
  double seconds = 0.0;
  std::string message;
  nlohmann::json info = nlohmann::json::object();
};

double slack_for(const std::string& quantity, double tol_p) {
  const std::string family = family_of(quantity);
  if (quantity == "dim") return 0.0;
  if (family == "exact") return 1e-12;
  if (quantity == "p-pptmix" || quantity.starts_with("p-fidelity")) return tol_p;
  return 1e-7;  // solver and sweep tolerances
}

std::string fig1_grid_csv() {
  std::ostringstream csv;
  csv << "theta";
  for (int d = 2; d <= 7; ++d) csv << ",E_GM_d" << d;
  csv << "\r\n";
  for (int k = 1; k <= 99; ++k) {
    const double theta = std::numbers::pi * k / 100.0;
    csv << csv_number(theta);
    for (int d = 2; d <= 7; ++d) csv << "," << csv_number(gm_ces_exact(d, theta).value);
    csv << "\r\n";
  }
  return csv.str();
}

int run_reproduce(ReproduceOptions o) {
  if (o.fig1) {
    if (!o.table.empty() && o.table != "fig1") throw UsageError("--fig1 and --table are exclusive");
    o.table = "fig1";
  }
  if (o.table.empty()) throw UsageError("pass --table <id> or --fig1");
  std::string csv_text;
  if (!o.reference.empty()) {
    std::ifstream in(o.reference);
    if (!in) throw UsageError("cannot read '" + o.reference + "'");
    csv_text.assign(std::istreambuf_iterator<char>(in), {});
  } else {
    const auto bundled = reference_table(o.table);
    if (!bundled) throw UsageError("unknown table '" + o.table + "'");
    csv_text = std::string(*bundled);
  }
  std::vector<RefCell> cells = parse_reference(csv_text);

  std::vector<std::string> families;
  if (!o.methods.empty()) {
    std::stringstream ss(o.methods);
    for (std::string m; std::getline(ss, m, ',');) families.push_back(m);
    std::erase_if(cells, [&](const RefCell& c) {
      return std::find(families.begin(), families.end(), family_of(c.quantity)) == families.end();
    });
  }

  Engine engine(o);
  std::vector<CellResult> results(cells.size());
  const auto started = std::chrono::steady_clock::now();
  auto elapsed = [&] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count(); };
  std::mutex log_mu;
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < cells.size(); i = next++) {
      const RefCell& c = cells[i];
      CellResult& r = results[i];
      r.tolerance = c.half_unit + slack_for(c.quantity, o.tol_p);
      const SubspaceArgs a{c.subspace, c.n_parties, c.d, c.theta};
      const auto t0 = std::chrono::steady_clock::now();
      try {
        if (o.time_limit > 0.0 && elapsed() > o.time_limit) throw SkipCell("--time-limit reached");
        engine.check_budget(c.quantity, a);
        const Value v = engine.get(c.quantity, a);
        r.value = v.v;
        r.info = v.info;
        r.diff = std::abs(v.v - c.value);
        r.status = r.diff <= r.tolerance ? "ok" : "exceeds";
      } catch (const SkipCell& e) {
        r.status = "skipped";
        r.message = e.what();
      } catch (const SolverFailure& e) {
        r.status = "solver-failure";
        r.message = e.what();
      } catch (const std::exception& e) {
        r.status = "failed";
        r.message = e.what();
      }
      r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      std::lock_guard lock(log_mu);
      std::cerr << c.table << " | " << c.row << " | " << c.column << ": " << r.status;
      if (!std::isnan(r.value)) std::cerr << " value " << csv_number(r.value) << " ref " << c.text << " |diff| " << csv_number(r.diff);
      if (!r.message.empty()) std::cerr << " (" << r.message << ")";
      std::cerr << '\n';
    }
  };
  const int jobs = std::max(1, std::min<int>(o.jobs, static_cast<int>(cells.size())));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  // Rows holding both a variational value and its SDP bound: note any gap.
  std::map<std::string, std::map<std::string, double>> by_row;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (!std::isnan(results[i].value)) by_row[cells[i].subspace + " " + cells[i].row][cells[i].quantity] = results[i].value;
  }
  nlohmann::json gaps = nlohmann::json::array();
  for (const auto& [row, q] : by_row) {
    for (const char* m : {"gm", "ggm"}) {
      const auto a = q.find(std::string(m) + "-seesaw");
      const auto b = q.find(std::string(m) + "-sdp");
      if (a != q.end() && b != q.end() && a->second - b->second > 1e-3) {
        gaps.push_back({{"row", row}, {"measure", m}, {"seesaw", a->second}, {"sdp", b->second}});
      }
    }
  }

  // Outputs.
  std::ostringstream csv;
  csv << "table,row,column,quantity,value,reference,abs_diff,tolerance,status\r\n";
  Manifest m("reproduce");
  m.set_seed(o.seed);
  m.parameters() = {{"table", o.table},         {"methods", o.methods},         {"max_D", o.max_d},
                    {"max_params", o.max_params}, {"max_restarts", o.max_restarts}, {"time_limit", o.time_limit},
                    {"tol_p", o.tol_p},         {"jobs", o.jobs}};
  m.solver() = {{"tolerance", IpmOptions{}.tolerance}, {"accept_tolerance", IpmOptions{}.accept_tolerance}};
  int exceeded = 0, failed = 0, skipped = 0;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const RefCell& c = cells[i];
    const CellResult& r = results[i];
    exceeded += r.status == "exceeds";
    failed += r.status == "solver-failure" || r.status == "failed";
    skipped += r.status == "skipped";
    csv << csv_field(c.table) << ',' << csv_field(c.row) << ',' << csv_field(c.column) << ',' << c.quantity << ','
        << csv_number(r.value) << ',' << c.text << ',' << csv_number(r.diff) << ',' << csv_number(r.tolerance) << ','
        << r.status << "\r\n";
    nlohmann::json rec = {{"table", c.table},      {"row", c.row},           {"column", c.column},
                          {"quantity", c.quantity}, {"reference", c.text},    {"reference_source", c.source},
                          {"status", r.status},     {"tolerance", r.tolerance}, {"seconds", r.seconds},
                          {"info", r.info}};
    rec["value"] = std::isnan(r.value) ? nlohmann::json(nullptr) : nlohmann::json(r.value);
    rec["abs_diff"] = std::isnan(r.diff) ? nlohmann::json(nullptr) : nlohmann::json(r.diff);
    if (!r.message.empty()) rec["message"] = r.message;
    m.add_record(std::move(rec));
  }
  nlohmann::json report = m.finish();
  report["summary"] = {{"cells", cells.size()}, {"exceeds", exceeded}, {"failed", failed}, {"skipped", skipped},
                       {"seesaw_sdp_gaps", gaps}};

  if (o.out.empty()) {
    write_output("", csv.str());
  } else {
    namespace fs = std::filesystem;
    fs::create_directories(o.out);
    const fs::path dir(o.out);
    write_output((dir / ("table_" + o.table + ".csv")).string(), csv.str());
    write_output((dir / ("table_" + o.table + "_reference.csv")).string(), csv_text);
    write_output((dir / ("table_" + o.table + "_report.json")).string(), pretty(report));
    if (o.table == "fig1") write_output((dir / "fig1_grid.csv").string(), fig1_grid_csv());
  }
  std::cerr << cells.size() << " cells: " << cells.size() - exceeded - failed - skipped << " ok, " << exceeded
            << " exceed tolerance, " << failed << " failed, " << skipped << " skipped\n";
  for (const auto& g : gaps) {
    std::cerr << "gap between seesaw and SDP (" << g["measure"].get<std::string>() << ") at "
              << g["row"].get<std::string>() << ": " << csv_number(g["seesaw"]) << " vs " << csv_number(g["sdp"]) << '\n';
  }
  if (failed > 0) return kExitSolver;
  if (exceeded > 0) return kExitTolerance;
  return kExitOk;
}

}  // namespace

Runner add_reproduce(CLI::App& app) {
  auto o = std::make_shared<ReproduceOptions>();
  o->seed = default_seed();
  CLI::App* cmd = app.add_subcommand("reproduce", "Recompute a reference table and report per-cell differences");
  cmd->add_option("--table", o->table, "I, II, III, IIIb, IV, V, VI or fig1");
  cmd->add_flag("--fig1", o->fig1, "Same as --table fig1; also writes the theta grid");
  cmd->add_option("--methods", o->methods, "Comma list of exact, seesaw, sdp, pptmix, fidelity, witness");
  cmd->add_option("--reference", o->reference, "Use this reference CSV instead of the bundled one");
  cmd->add_option("--out", o->out, "Output directory (default: computed CSV on stdout)");
  cmd->add_option("--max-D", o->max_d, "Skip SDP cells on spaces larger than this")->check(CLI::PositiveNumber);
  cmd->add_option("--max-params", o->max_params, "Skip SDP cells with more free parameters than this")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--max-restarts", o->max_restarts, "Seesaw restarts per cell")->check(CLI::PositiveNumber);
  cmd->add_option("--time-limit", o->time_limit, "Skip cells that would start after this many seconds (0 = none)");
  cmd->add_option("--tol", o->tol_p, "Bracket width for noise-threshold bisection")->check(CLI::PositiveNumber);
  cmd->add_option("--jobs", o->jobs, "Cells computed in parallel")->check(CLI::PositiveNumber);
  cmd->add_option("--seed", o->seed, "Seesaw seed (default GESQ_SEED or 0)");
  return [o] { return run_reproduce(*o); };
}

}  // namespace gesq::cli
