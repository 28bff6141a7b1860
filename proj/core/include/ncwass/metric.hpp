#pragma once

#include <optional>
#include <vector>

#include "ncwass/algebra.hpp"
#include "ncwass/gauge.hpp"
#include "ncwass/solver.hpp"
#include "ncwass/transport.hpp"

namespace ncwass {

// Value of a spectral-distance supremum with the element (or coefficient
// vector) achieving it within the certified gap. value = +infinity when the
// objective pairs nontrivially with the gauge null space; the witness then
// holds the unbounded direction. certified is false when the cutting plane
// stopped on its cut budget (the value is still a valid lower bound).
struct DistanceResult {
  double value = 0.0;
  double certified_gap = 0.0;
  bool certified = true;
  std::optional<HermitianElement> witness_element;
  std::optional<Vector> witness_vector;
  std::vector<CutRecord> cut_history;  // filled when opts.record_cuts
};

// d_L(mu, nu) = sup { |mu(f) - nu(f)| : L(f) <= 1, f self-adjoint }.
// Requires a MultiCommutator gauge (the full-algebra supremum needs a gauge
// finite on all of A^sa).
DistanceResult spectral_distance(const LipGauge& gauge, const DensityState& mu,
                                 const DensityState& nu,
                                 const BallOptions& opts = {});

// Same supremum restricted to the context's subalgebra, on restricted
// states. Polyhedral (finite-metric) restrictions solve an exact LP;
// spectral restrictions go through the cutting plane.
DistanceResult context_distance(const LipGauge& gauge,
                                const CommutativeContext& alpha,
                                const ProbVector& mu_a, const ProbVector& nu_a,
                                const BallOptions& opts = {});

struct PointMetricResult {
  FiniteMetricSpace space;
  RealMatrix gaps;  // per-entry certified solver gaps
  bool pseudo = false;
  bool extended = false;
  bool certified = true;  // false if any entry hit the cut budget
};

// dist(i, j) = context distance between the Dirac pair (delta_i, delta_j).
// The triangle inequality is validated post hoc within the certified gaps;
// a violation beyond them throws NumericalError("MetricViolation").
PointMetricResult context_point_metric(const LipGauge& gauge,
                                       const CommutativeContext& alpha,
                                       const BallOptions& opts = {});

struct DiameterResult {
  std::vector<double> per_context;
  double max = 0.0;
};

// Diam(S(A_alpha)) per maximal context (attained at Dirac pairs) and the
// maximum over the supplied contexts.
DiameterResult diameter(const LipGauge& gauge,
                        const std::vector<CommutativeContext>& contexts,
                        const BallOptions& opts = {});

}  // namespace ncwass
