#pragma once

#include "ncwass/algebra.hpp"
#include "ncwass/common.hpp"
#include "ncwass/rng.hpp"
#include "ncwass/transport.hpp"

namespace ncwass {

// Haar-distributed unitary: QR of a complex Gaussian matrix with the phases
// of diag(R) fixed.
Matrix haar_unitary(int n, Rng& rng);

HermitianElement random_hermitian(int n, Rng& rng, double scale = 1.0);

// Hilbert-Schmidt ensemble: G G^* / tr(G G^*).
DensityState random_density(int n, Rng& rng);

// Normalized exponentials (flat Dirichlet).
ProbVector random_prob(int k, Rng& rng);

CommutativeContext random_maximal_context(int n, Rng& rng);

// Distances of k random points in R^3: a genuine metric by construction.
FiniteMetricSpace random_metric_space(int k, Rng& rng);

}  // namespace ncwass
