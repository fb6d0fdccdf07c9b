#include "cli_common.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numbers>

#include "gesq/json_io.hpp"
#include "gesq/subspaces.hpp"

#ifndef GESQ_VERSION
#define GESQ_VERSION "unknown"
#endif

namespace gesq::cli {
namespace {

double parse_number(std::string_view s, const std::string& whole) {
  double v = 0.0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || end != s.data() + s.size()) throw UsageError("cannot parse angle '" + whole + "'");
  return v;
}

}  // namespace

double parse_angle(const std::string& text) {
  std::string s;
  for (char c : text) {
    if (c != ' ') s.push_back(c);
  }
  if (s.empty()) throw UsageError("empty angle");
  const auto at = s.find("pi");
  if (at == std::string::npos) return parse_number(s, text);

  // [coef][*]pi[/den]
  std::string_view coef(s.data(), at);
  if (!coef.empty() && coef.back() == '*') coef.remove_suffix(1);
  double value = std::numbers::pi;
  if (coef == "-") {
    value = -value;
  } else if (!coef.empty()) {
    value *= parse_number(coef, text);
  }
  std::string_view rest(s.data() + at + 2, s.size() - at - 2);
  if (!rest.empty()) {
    if (rest.front() != '/') throw UsageError("cannot parse angle '" + text + "'");
    rest.remove_prefix(1);
    const double den = parse_number(rest, text);
    if (den == 0.0) throw UsageError("zero denominator in angle '" + text + "'");
    value /= den;
  }
  return value;
}

std::uint64_t default_seed() {
  const char* env = std::getenv("GESQ_SEED");
  if (env == nullptr || *env == '\0') return 0;
  std::uint64_t seed = 0;
  const std::string_view s(env);
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), seed);
  if (ec != std::errc() || end != s.data() + s.size()) throw UsageError("GESQ_SEED must be a non-negative integer");
  return seed;
}

Subspace SubspaceArgs::build() const {
  try {
    return construct_subspace(label, n_parties, d, theta_value());
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

nlohmann::json SubspaceArgs::to_json() const {
  return {{"subspace", label}, {"N", n_parties}, {"d", d}, {"theta", theta}, {"theta_rad", theta_value()}};
}

Manifest::Manifest(std::string command) : started_(std::chrono::steady_clock::now()) {
  doc_["command"] = std::move(command);
  doc_["version"] = GESQ_VERSION;
  doc_["parameters"] = nlohmann::json::object();
  doc_["solver"] = nlohmann::json::object();
  doc_["rng_seed"] = 0;
  doc_["records"] = nlohmann::json::array();
}

nlohmann::json Manifest::finish() {
  doc_["wall_clock_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - started_).count();
  return doc_;
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot write '" + path + "'");
  out << text;
  if (!text.empty() && text.back() != '\n') out << '\n';
}

std::string pretty(const nlohmann::json& j) { return j.dump(2); }

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string csv_number(double v) {
  if (std::isnan(v)) return "";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

nlohmann::json vector_json(const CVector& v) {
  nlohmann::json out = nlohmann::json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(complex_to_json(v(i)));
  return out;
}

}  // namespace gesq::cli
