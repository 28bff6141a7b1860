#include "ncwass/serialize.hpp"

#include <cinttypes>
#include <cstdio>
#include <sstream>

#include "ncwass/errors.hpp"

namespace ncwass {

namespace {

void canonical_number(std::string& out, double v) {
  if (is_infinite(v)) {
    out += v > 0 ? "\"inf\"" : "\"-inf\"";
    return;
  }
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  out += buf;
}

void canonical_write(std::string& out, const Json& j) {
  switch (j.type()) {
    case Json::value_t::object: {
      out += '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {  // keys sorted by map
        if (!first) out += ',';
        first = false;
        out += Json(it.key()).dump();
        out += ':';
        canonical_write(out, it.value());
      }
      out += '}';
      break;
    }
    case Json::value_t::array: {
      out += '[';
      for (size_t i = 0; i < j.size(); ++i) {
        if (i) out += ',';
        canonical_write(out, j[i]);
      }
      out += ']';
      break;
    }
    case Json::value_t::number_float:
      canonical_number(out, j.get<double>());
      break;
    default:
      out += j.dump();
  }
}

[[noreturn]] void schema_error(const std::string& path, const std::string& what) {
  throw ValidationError("SchemaViolation", path + ": " + what);
}

}  // namespace

std::string canonical_dump(const Json& j) {
  std::string out;
  canonical_write(out, j);
  return out;
}

std::string digest_hex(const Json& j) {
  std::string bytes = canonical_dump(j);
  uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016" PRIx64, h);
  return buf;
}

Json ext_to_json(double value) {
  if (is_infinite(value)) return Json(value > 0 ? "inf" : "-inf");
  return Json(value);
}

double ext_from_json(const Json& j, const std::string& path) {
  if (j.is_string()) {
    std::string s = j.get<std::string>();
    if (s == "inf") return kInf;
    if (s == "-inf") return -kInf;
    schema_error(path, "expected number or \"inf\"");
  }
  if (!j.is_number()) schema_error(path, "expected number or \"inf\"");
  return j.get<double>();
}

Json matrix_to_json(const Matrix& m) {
  Json rows = Json::array();
  for (int i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (int j = 0; j < m.cols(); ++j) {
      row.push_back(Json::array({m(i, j).real(), m(i, j).imag()}));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

Json rmatrix_to_json(const RealMatrix& m) {
  Json rows = Json::array();
  for (int i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(ext_to_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json vector_to_json(const Vector& v) {
  Json out = Json::array();
  for (int i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

Json context_to_json(const CommutativeContext& c) {
  Json partition = Json::array();
  for (const auto& block : c.partition()) {
    Json b = Json::array();
    for (int idx : block) b.push_back(idx + 1);  // 1-based on the wire
    partition.push_back(std::move(b));
  }
  return Json{{"frame", matrix_to_json(c.frame())}, {"partition", partition}};
}

Json gauge_to_json(const LipGauge& g) {
  if (g.variant() == LipGauge::Variant::MultiCommutator) {
    Json diracs = Json::array();
    for (const auto& d : g.diracs()) diracs.push_back(matrix_to_json(d.entries()));
    return Json{{"variant", "multi_commutator"}, {"diracs", diracs}};
  }
  return Json{{"variant", "finite_metric"},
              {"context", context_to_json(g.base_context())},
              {"dist", rmatrix_to_json(g.dist())}};
}

Json diagram_to_json(const ContextDiagram& d) {
  Json contexts = Json::array();
  for (const auto& c : d.contexts()) contexts.push_back(context_to_json(c));
  Json inclusions = Json::array();
  for (const auto& inc : d.inclusions()) {
    inclusions.push_back(Json::array({inc.coarse, inc.fine}));
  }
  return Json{{"contexts", contexts}, {"inclusions", inclusions}};
}

Json quasi_state_to_json(const QuasiState& q) {
  Json values = Json::array();
  for (const auto& v : q.values()) values.push_back(vector_to_json(v.p()));
  return Json{{"diagram", diagram_to_json(q.diagram())}, {"values", values}};
}

const Json& require_key(const Json& j, const char* key, const std::string& path) {
  if (!j.is_object()) schema_error(path, "expected object");
  auto it = j.find(key);
  if (it == j.end()) schema_error(path + "/" + key, "missing required field");
  return *it;
}

double parse_double(const Json& j, const std::string& path) {
  if (!j.is_number()) schema_error(path, "expected number");
  return j.get<double>();
}

int parse_int(const Json& j, const std::string& path) {
  if (!j.is_number_integer()) schema_error(path, "expected integer");
  return j.get<int>();
}

Matrix parse_matrix(const Json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) schema_error(path, "expected nonempty array of rows");
  const int n = static_cast<int>(j.size());
  Matrix m(n, n);
  for (int i = 0; i < n; ++i) {
    const Json& row = j[i];
    std::string rpath = path + "/" + std::to_string(i);
    if (!row.is_array() || static_cast<int>(row.size()) != n) {
      schema_error(rpath, "expected row of length " + std::to_string(n));
    }
    for (int c = 0; c < n; ++c) {
      const Json& e = row[c];
      std::string epath = rpath + "/" + std::to_string(c);
      if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
        schema_error(epath, "expected [re, im] pair");
      }
      m(i, c) = Complex(e[0].get<double>(), e[1].get<double>());
    }
  }
  return m;
}

RealMatrix parse_rmatrix(const Json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) schema_error(path, "expected nonempty array of rows");
  const int n = static_cast<int>(j.size());
  RealMatrix m(n, static_cast<int>(j[0].size()));
  for (int i = 0; i < n; ++i) {
    const Json& row = j[i];
    std::string rpath = path + "/" + std::to_string(i);
    if (!row.is_array() || static_cast<int>(row.size()) != m.cols()) {
      schema_error(rpath, "ragged rows");
    }
    for (int c = 0; c < m.cols(); ++c) {
      m(i, c) = ext_from_json(row[c], rpath + "/" + std::to_string(c));
    }
  }
  return m;
}

Vector parse_vector(const Json& j, const std::string& path) {
  if (!j.is_array()) schema_error(path, "expected array");
  Vector v(j.size());
  for (size_t i = 0; i < j.size(); ++i) {
    v(static_cast<int>(i)) = parse_double(j[i], path + "/" + std::to_string(i));
  }
  return v;
}

std::vector<std::vector<int>> parse_partition(const Json& j, int n,
                                              const std::string& path) {
  if (!j.is_array() || j.empty()) schema_error(path, "expected array of blocks");
  std::vector<std::vector<int>> blocks;
  for (size_t b = 0; b < j.size(); ++b) {
    std::string bpath = path + "/" + std::to_string(b);
    if (!j[b].is_array()) schema_error(bpath, "expected index array");
    std::vector<int> block;
    for (size_t i = 0; i < j[b].size(); ++i) {
      int idx = parse_int(j[b][i], bpath + "/" + std::to_string(i));
      if (idx < 1 || idx > n) schema_error(bpath, "index outside {1..n}");
      block.push_back(idx - 1);
    }
    blocks.push_back(std::move(block));
  }
  return blocks;
}

CommutativeContext parse_context(const Json& j, const std::string& path) {
  Matrix frame = parse_matrix(require_key(j, "frame", path), path + "/frame");
  auto partition = parse_partition(require_key(j, "partition", path),
                                   static_cast<int>(frame.rows()),
                                   path + "/partition");
  return CommutativeContext(std::move(frame), std::move(partition));
}

LipGauge parse_gauge(const Json& j, const std::string& path) {
  const Json& variant = require_key(j, "variant", path);
  if (!variant.is_string()) schema_error(path + "/variant", "expected string");
  std::string v = variant.get<std::string>();
  if (v == "multi_commutator") {
    const Json& dj = require_key(j, "diracs", path);
    if (!dj.is_array() || dj.empty()) {
      schema_error(path + "/diracs", "expected nonempty array");
    }
    std::vector<HermitianElement> diracs;
    for (size_t i = 0; i < dj.size(); ++i) {
      diracs.emplace_back(
          parse_matrix(dj[i], path + "/diracs/" + std::to_string(i)));
    }
    return LipGauge::multi_commutator(std::move(diracs));
  }
  if (v == "finite_metric") {
    CommutativeContext ctx =
        parse_context(require_key(j, "context", path), path + "/context");
    RealMatrix dist = parse_rmatrix(require_key(j, "dist", path), path + "/dist");
    return LipGauge::finite_metric(std::move(ctx), std::move(dist));
  }
  schema_error(path + "/variant",
               "expected \"multi_commutator\" or \"finite_metric\"");
}

DensityState parse_density(const Json& j, const std::string& path) {
  return DensityState(parse_matrix(j, path));
}

ProbVector parse_prob(const Json& j, const std::string& path) {
  return ProbVector(parse_vector(j, path));
}

ContextDiagram parse_diagram(const Json& j, const std::string& path) {
  const Json& cj = require_key(j, "contexts", path);
  if (!cj.is_array() || cj.empty()) {
    schema_error(path + "/contexts", "expected nonempty array");
  }
  std::vector<CommutativeContext> contexts;
  for (size_t i = 0; i < cj.size(); ++i) {
    contexts.push_back(parse_context(cj[i], path + "/contexts/" + std::to_string(i)));
  }
  std::vector<std::pair<int, int>> inclusions;
  if (j.contains("inclusions")) {
    const Json& ij = j["inclusions"];
    if (!ij.is_array()) schema_error(path + "/inclusions", "expected array");
    for (size_t e = 0; e < ij.size(); ++e) {
      std::string epath = path + "/inclusions/" + std::to_string(e);
      if (!ij[e].is_array() || ij[e].size() != 2) {
        schema_error(epath, "expected [coarse, fine] pair");
      }
      inclusions.emplace_back(parse_int(ij[e][0], epath + "/0"),
                              parse_int(ij[e][1], epath + "/1"));
    }
  }
  return ContextDiagram(std::move(contexts), inclusions);
}

QuasiState parse_quasi_state(const Json& j, const std::string& path) {
  ContextDiagram diagram =
      parse_diagram(require_key(j, "diagram", path), path + "/diagram");
  const Json& vj = require_key(j, "values", path);
  if (!vj.is_array() || vj.size() != diagram.contexts().size()) {
    schema_error(path + "/values", "expected one distribution per context");
  }
  std::vector<ProbVector> values;
  for (size_t i = 0; i < vj.size(); ++i) {
    values.push_back(parse_prob(vj[i], path + "/values/" + std::to_string(i)));
  }
  return QuasiState(std::move(diagram), std::move(values));
}

std::string context_key(const CommutativeContext& c) {
  return canonical_dump(context_to_json(c));
}

}  // namespace ncwass
