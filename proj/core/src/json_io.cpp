#include "gesq/json_io.hpp"

#include <stdexcept>

namespace gesq {
namespace {

void expect_kind(const nlohmann::json& j, const char* kind) {
  if (!j.is_object() || j.value("schema", "") != kJsonSchema) {
    throw std::invalid_argument("json: missing or unsupported schema tag");
  }
  if (j.value("kind", "") != kind) {
    throw std::invalid_argument(std::string("json: expected kind '") + kind + "'");
  }
}

nlohmann::json header(const HilbertSpace& space, const char* kind) {
  nlohmann::json j;
  j["schema"] = kJsonSchema;
  j["kind"] = kind;
  j["dims"] = space.dims();
  return j;
}

}  // namespace

nlohmann::json complex_to_json(Complex z) { return nlohmann::json::array({z.real(), z.imag()}); }

Complex complex_from_json(const nlohmann::json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2) throw std::invalid_argument("json: complex numbers are [re, im]");
  return {j[0].get<double>(), j[1].get<double>()};
}

nlohmann::json matrix_to_json(const CMatrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Index r = 0; r < m.rows(); ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (Index c = 0; c < m.cols(); ++c) row.push_back(complex_to_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

CMatrix matrix_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.empty() || !j[0].is_array()) throw std::invalid_argument("json: matrix must be a list of rows");
  const Index rows = static_cast<Index>(j.size());
  const Index cols = static_cast<Index>(j[0].size());
  CMatrix m(rows, cols);
  for (Index r = 0; r < rows; ++r) {
    if (static_cast<Index>(j[r].size()) != cols) throw std::invalid_argument("json: ragged matrix");
    for (Index c = 0; c < cols; ++c) m(r, c) = complex_from_json(j[r][c]);
  }
  return m;
}

nlohmann::json to_json(const PureState& state) {
  nlohmann::json j = header(state.space(), "vector");
  nlohmann::json data = nlohmann::json::array();
  for (Index i = 0; i < state.amplitudes().size(); ++i) data.push_back(complex_to_json(state.amplitudes()(i)));
  j["data"] = std::move(data);
  return j;
}

nlohmann::json to_json(const HermitianOp& op) {
  nlohmann::json j = header(op.space(), "hermitian");
  j["data"] = matrix_to_json(op.matrix());
  return j;
}

nlohmann::json to_json(const Subspace& subspace) {
  nlohmann::json j = header(subspace.space(), "subspace");
  j["label"] = subspace.label();
  j["dim"] = subspace.dim();
  j["basis"] = matrix_to_json(subspace.basis());
  return j;
}

PureState state_from_json(const nlohmann::json& j) {
  expect_kind(j, "vector");
  HilbertSpace space(j.at("dims").get<std::vector<int>>());
  const auto& data = j.at("data");
  CVector v(static_cast<Index>(data.size()));
  for (Index i = 0; i < v.size(); ++i) v(i) = complex_from_json(data[i]);
  return PureState(std::move(space), std::move(v));
}

HermitianOp hermitian_from_json(const nlohmann::json& j) {
  expect_kind(j, "hermitian");
  HilbertSpace space(j.at("dims").get<std::vector<int>>());
  return HermitianOp(std::move(space), matrix_from_json(j.at("data")));
}

Subspace subspace_from_json(const nlohmann::json& j) {
  expect_kind(j, "subspace");
  HilbertSpace space(j.at("dims").get<std::vector<int>>());
  return Subspace(std::move(space), matrix_from_json(j.at("basis")), j.value("label", ""));
}

}  // namespace gesq
