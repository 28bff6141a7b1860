#include "ncwass/fixtures.hpp"

#include <fstream>

#include "ncwass/errors.hpp"
#include "ncwass/sampling.hpp"

namespace ncwass::fixtures {

Matrix pauli_x() { return (Matrix(2, 2) << 0, 1, 1, 0).finished(); }
Matrix pauli_y() {
  return (Matrix(2, 2) << 0, Complex(0, -1), Complex(0, 1), 0).finished();
}
Matrix pauli_z() { return (Matrix(2, 2) << 1, 0, 0, -1).finished(); }

LipGauge qubit_pauli_gauge() {
  return LipGauge::multi_commutator(
      {HermitianElement(pauli_z()), HermitianElement(pauli_x())});
}

CommutativeContext qubit_sigma_z_context() {
  return CommutativeContext::maximal(Matrix::Identity(2, 2));
}

CommutativeContext qubit_sigma_x_context() {
  const double s = 1.0 / std::sqrt(2.0);
  Matrix h(2, 2);
  h << s, s, s, -s;
  return CommutativeContext::maximal(h);
}

DensityState qubit_up() { return DensityState((Matrix(2, 2) << 1, 0, 0, 0).finished()); }
DensityState qubit_down() { return DensityState((Matrix(2, 2) << 0, 0, 0, 1).finished()); }

ContextDiagram qubit_diagram() {
  CommutativeContext trivial(Matrix::Identity(2, 2), {{0, 1}});
  std::vector<CommutativeContext> contexts{qubit_sigma_z_context(),
                                           qubit_sigma_x_context(), trivial};
  return ContextDiagram(std::move(contexts), {{2, 0}, {2, 1}});
}

QuasiState gleason_quasi_state() {
  std::vector<CommutativeContext> contexts{qubit_sigma_z_context(),
                                           qubit_sigma_x_context()};
  ContextDiagram diagram(std::move(contexts), {});
  Vector v(2);
  v << 1.0, 0.0;
  return QuasiState(std::move(diagram), {ProbVector(v), ProbVector(v)});
}

ContextDiagram m4_chain_diagram(uint64_t seed) {
  Rng rng = Rng(seed).derive("m4-frame");
  Matrix u = haar_unitary(4, rng);
  std::vector<CommutativeContext> contexts;
  contexts.emplace_back(u, std::vector<std::vector<int>>{{0, 1, 2, 3}});
  contexts.emplace_back(u, std::vector<std::vector<int>>{{0, 1}, {2, 3}});
  contexts.emplace_back(u, std::vector<std::vector<int>>{{0}, {1}, {2}, {3}});
  return ContextDiagram(std::move(contexts), {{0, 1}, {1, 2}});
}

LipGauge m4_gauge(uint64_t seed) {
  Rng rng = Rng(seed).derive("m4-gauge");
  for (int attempt = 0; attempt < 16; ++attempt) {
    std::vector<HermitianElement> diracs{random_hermitian(4, rng),
                                         random_hermitian(4, rng)};
    LipGauge gauge = LipGauge::multi_commutator(std::move(diracs));
    if (null_space(gauge).is_only_constants) return gauge;
  }
  throw NumericalError("NumericalFailure",
                       "could not draw an M_4 gauge with trivial commutant");
}

LipGauge diag_m3_line_gauge() {
  RealMatrix dist(3, 3);
  dist << 0, 1, 2, 1, 0, 1, 2, 1, 0;
  return induced_point_gauge(dist);
}

DensityState diag_m3_state_ends() {
  Matrix rho = Matrix::Zero(3, 3);
  rho(0, 0) = 0.5;
  rho(2, 2) = 0.5;
  return DensityState(rho);
}

DensityState diag_m3_state_middle() {
  Matrix rho = Matrix::Zero(3, 3);
  rho(1, 1) = 1.0;
  return DensityState(rho);
}

std::map<std::string, Json> fixture_set(uint64_t seed) {
  std::map<std::string, Json> out;

  out["qubit_pauli_gauge.json"] = gauge_to_json(qubit_pauli_gauge());
  out["qubit_sigma_z_context.json"] = context_to_json(qubit_sigma_z_context());
  out["qubit_sigma_x_context.json"] = context_to_json(qubit_sigma_x_context());
  out["qubit_dirac_states.json"] = Json{
      {"mu", matrix_to_json(qubit_up().rho())},
      {"nu", matrix_to_json(qubit_down().rho())}};
  out["qubit_spectral_job.json"] = Json{
      {"gauge", gauge_to_json(qubit_pauli_gauge())},
      {"mu", matrix_to_json(qubit_up().rho())},
      {"nu", matrix_to_json(qubit_down().rho())}};

  {
    RealMatrix dist(2, 2);
    dist << 0, 1, 1, 0;
    out["ot_2point_p2.json"] =
        Json{{"dist", rmatrix_to_json(dist)},
             {"mu", Json::array({0.75, 0.25})},
             {"nu", Json::array({0.25, 0.75})},
             {"p", 2.0}};
  }
  {
    RealMatrix dist(3, 3);
    dist << 0, 1, 2, 1, 0, 1, 2, 1, 0;
    out["ot_3point_line_p1.json"] =
        Json{{"dist", rmatrix_to_json(dist)},
             {"mu", Json::array({0.5, 0.0, 0.5})},
             {"nu", Json::array({0.0, 1.0, 0.0})},
             {"p", 1.0}};
  }

  out["m4_chain_diagram.json"] = diagram_to_json(m4_chain_diagram(seed));
  out["m4_gauge.json"] = gauge_to_json(m4_gauge(seed));
  {
    Rng rng = Rng(seed).derive("m4-demo-pairs");
    Json pairs = Json::array();
    for (int s = 0; s < 4; ++s) {
      pairs.push_back(Json{{"mu", matrix_to_json(random_density(4, rng).rho())},
                           {"nu", matrix_to_json(random_density(4, rng).rho())}});
    }
    out["m4_state_pairs.json"] = Json{{"seed", seed}, {"pairs", pairs}};
  }

  out["diag_m3_line_gauge.json"] = gauge_to_json(diag_m3_line_gauge());
  out["diag_m3_ot_job.json"] = Json{
      {"gauge", gauge_to_json(diag_m3_line_gauge())},
      {"mu", matrix_to_json(diag_m3_state_ends().rho())},
      {"nu", matrix_to_json(diag_m3_state_middle().rho())},
      {"p", 1.0}};

  out["gleason_quasi_state.json"] = quasi_state_to_json(gleason_quasi_state());

  {
    Rng rng = Rng(42).derive("metric-8pt");
    FiniteMetricSpace space = random_metric_space(8, rng);
    Rng mr = Rng(42).derive("marginals-8pt");
    out["random_metric_8pt_seed42.json"] =
        Json{{"dist", rmatrix_to_json(space.dist())},
             {"mu", vector_to_json(random_prob(8, mr).p())},
             {"nu", vector_to_json(random_prob(8, mr).p())},
             {"p", 1.0}};
  }
  return out;
}

Json emit_fixtures(const std::filesystem::path& dir, uint64_t seed) {
  std::filesystem::create_directories(dir);
  auto set = fixture_set(seed);
  Json manifest = Json::object();
  manifest["seed"] = seed;
  Json digests = Json::object();
  for (const auto& [name, content] : set) {
    std::string bytes = canonical_dump(content);
    std::ofstream f(dir / name, std::ios::binary);
    if (!f) {
      throw ValidationError("IoError", "cannot write fixture " + name);
    }
    f << bytes << "\n";
    digests[name] = digest_hex(content);
  }
  manifest["digests"] = digests;
  manifest["count"] = set.size();
  std::ofstream mf(dir / "fixtures_digests.json", std::ios::binary);
  mf << canonical_dump(manifest) << "\n";
  return manifest;
}

}  // namespace ncwass::fixtures
