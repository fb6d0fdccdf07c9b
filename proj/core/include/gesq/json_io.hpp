#pragma once

// JSON import/export of vectors, Hermitian matrices and subspaces.
//
// Layout (schema "gesq/1"):
//   {"schema": "gesq/1", "kind": "vector" | "hermitian" | "subspace",
//    "dims": [d_0, ...], "data": ...}
// Complex numbers are two-element arrays [re, im]. Vectors store "data" as
// a list of complex numbers, matrices as a list of rows. Subspaces store the
// basis matrix (D rows, m columns) under "basis" plus "label" and "dim".

#include <nlohmann/json.hpp>

#include "gesq/tensor_core.hpp"

namespace gesq {

inline constexpr const char* kJsonSchema = "gesq/1";

nlohmann::json complex_to_json(Complex z);
Complex complex_from_json(const nlohmann::json& j);

nlohmann::json matrix_to_json(const CMatrix& m);
CMatrix matrix_from_json(const nlohmann::json& j);

nlohmann::json to_json(const PureState& state);
nlohmann::json to_json(const HermitianOp& op);
nlohmann::json to_json(const Subspace& subspace);

PureState state_from_json(const nlohmann::json& j);
HermitianOp hermitian_from_json(const nlohmann::json& j);
Subspace subspace_from_json(const nlohmann::json& j);

}  // namespace gesq
