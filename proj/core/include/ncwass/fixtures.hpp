#pragma once

#include <filesystem>
#include <map>
#include <string>

#include "ncwass/algebra.hpp"
#include "ncwass/gauge.hpp"
#include "ncwass/serialize.hpp"

namespace ncwass::fixtures {

Matrix pauli_x();
Matrix pauli_y();
Matrix pauli_z();

// Two-Dirac gauge {sigma_z, sigma_x} on M_2.
LipGauge qubit_pauli_gauge();
CommutativeContext qubit_sigma_z_context();
CommutativeContext qubit_sigma_x_context();  // Hadamard frame
DensityState qubit_up();                     // diag(1, 0)
DensityState qubit_down();                   // diag(0, 1)

// Diagram {sigma_z-ctx, sigma_x-ctx} plus the trivial context.
ContextDiagram qubit_diagram();

// The non-extendable qubit quasi-state: (1,0) on both Pauli contexts.
QuasiState gleason_quasi_state();

// M_4 partition chain {1..4} -> {{1,2},{3,4}} -> singletons over one seeded
// Haar frame, inclusions transitively closed.
ContextDiagram m4_chain_diagram(uint64_t seed);

// Seeded two-Dirac gauge on M_4 with trivial joint commutant.
LipGauge m4_gauge(uint64_t seed);

// Line metric (1, 1, 2) on the diagonal context of M_3.
LipGauge diag_m3_line_gauge();
DensityState diag_m3_state_ends();    // diag(0.5, 0, 0.5)
DensityState diag_m3_state_middle();  // diag(0, 1, 0)

// The canonical instance files used by the acceptance suite, keyed by file
// name. Deterministic in the seed.
std::map<std::string, Json> fixture_set(uint64_t seed);

// Writes fixture_set(seed) into dir plus a digest manifest
// (fixtures_digests.json). Returns the manifest.
Json emit_fixtures(const std::filesystem::path& dir, uint64_t seed);

}  // namespace ncwass::fixtures
