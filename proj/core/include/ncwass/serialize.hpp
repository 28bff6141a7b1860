#pragma once

#include <json.hpp>
#include <string>

#include "ncwass/algebra.hpp"
#include "ncwass/gauge.hpp"
#include "ncwass/transport.hpp"

namespace ncwass {

using Json = nlohmann::json;

// Canonical serialization: object keys sorted, floats printed with 17
// significant digits, "inf" as a literal string. Digest = FNV-1a 64 of the
// canonical bytes, as a hex string.
std::string canonical_dump(const Json& j);
std::string digest_hex(const Json& j);

// Extended-real value <-> JSON (number or the string "inf").
Json ext_to_json(double value);
double ext_from_json(const Json& j, const std::string& path);

// --- writers ---------------------------------------------------------
Json matrix_to_json(const Matrix& m);          // entries as [re, im]
Json rmatrix_to_json(const RealMatrix& m);     // plain numbers
Json vector_to_json(const Vector& v);
Json context_to_json(const CommutativeContext& c);   // 1-based partition
Json gauge_to_json(const LipGauge& g);
Json diagram_to_json(const ContextDiagram& d);
Json quasi_state_to_json(const QuasiState& q);

// --- path-tracked parsers --------------------------------------------
// All throw ValidationError("SchemaViolation", ...) carrying the JSON
// pointer of the offending node.
const Json& require_key(const Json& j, const char* key, const std::string& path);
double parse_double(const Json& j, const std::string& path);
int parse_int(const Json& j, const std::string& path);
Matrix parse_matrix(const Json& j, const std::string& path);
RealMatrix parse_rmatrix(const Json& j, const std::string& path);
Vector parse_vector(const Json& j, const std::string& path);
std::vector<std::vector<int>> parse_partition(const Json& j, int n,
                                              const std::string& path);
CommutativeContext parse_context(const Json& j, const std::string& path);
LipGauge parse_gauge(const Json& j, const std::string& path);
DensityState parse_density(const Json& j, const std::string& path);
ProbVector parse_prob(const Json& j, const std::string& path);
ContextDiagram parse_diagram(const Json& j, const std::string& path);
QuasiState parse_quasi_state(const Json& j, const std::string& path);

// Deterministic identity string for a context (canonical frame + partition);
// used for witness tie-breaking and per-context report keys.
std::string context_key(const CommutativeContext& c);

}  // namespace ncwass
