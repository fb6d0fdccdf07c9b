#pragma once

#include <chrono>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gesq/tensor_core.hpp"

namespace gesq::cli {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitTolerance = 2;
inline constexpr int kExitSolver = 3;
inline constexpr int kExitUsage = 64;

/// Bad flags or an incompatible combination; maps to kExitUsage.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Radians, or a literal multiple of pi: "pi", "pi/2", "2pi/3", "0.25*pi".
double parse_angle(const std::string& text);

/// Default seed 0, overridden by GESQ_SEED.
std::uint64_t default_seed();

/// Parameters that pick a subspace from the constructors.
struct SubspaceArgs {
  std::string label = "S";
  int n_parties = 3;
  int d = 3;
  std::string theta = "pi/2";

  double theta_value() const { return parse_angle(theta); }
  Subspace build() const;
  nlohmann::json to_json() const;
};

/// Envelope written by every command.
class Manifest {
 public:
  explicit Manifest(std::string command);

  nlohmann::json& parameters() { return doc_["parameters"]; }
  nlohmann::json& solver() { return doc_["solver"]; }
  void set_seed(std::uint64_t seed) { doc_["rng_seed"] = seed; }
  void add_record(nlohmann::json record) { doc_["records"].push_back(std::move(record)); }
  const nlohmann::json& records() const { return doc_["records"]; }

  /// Stamps the wall-clock and returns the finished document.
  nlohmann::json finish();

 private:
  nlohmann::json doc_;
  std::chrono::steady_clock::time_point started_;
};

/// Writes `text` to `path`, or to stdout when path is empty or "-".
void write_output(const std::string& path, const std::string& text);

std::string pretty(const nlohmann::json& j);

/// RFC-4180 field quoting.
std::string csv_field(const std::string& s);
std::string csv_number(double v);

/// Plain vectors for JSON records (list of [re, im]).
nlohmann::json vector_json(const CVector& v);

}  // namespace gesq::cli
