#include "ncwass/metric.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ncwass/errors.hpp"

namespace ncwass {

DistanceResult spectral_distance(const LipGauge& gauge, const DensityState& mu,
                                 const DensityState& nu, const BallOptions& opts) {
  if (gauge.variant() != LipGauge::Variant::MultiCommutator) {
    throw ValidationError(
        "UnsupportedVariant",
        "spectral_distance needs a gauge finite on the whole algebra");
  }
  if (mu.dim() != gauge.dim() || nu.dim() != gauge.dim()) {
    throw ValidationError("DimensionMismatch",
                          "state dimension differs from gauge");
  }
  const int n = gauge.dim();
  const auto& basis = hermitian_basis(n);
  const int m = static_cast<int>(basis.size());

  Matrix delta = mu.rho() - nu.rho();
  BallMaximization prob;
  prob.objective = Vector(m);
  for (int a = 0; a < m; ++a) {
    prob.objective(a) = (delta * basis[a]).trace().real();
  }
  for (const auto& d : gauge.diracs()) {
    std::vector<Matrix> row;
    row.reserve(m);
    for (int a = 0; a < m; ++a) {
      row.push_back(commutator(d.entries(), basis[a]));
    }
    prob.constraint_maps.push_back(std::move(row));
  }
  for (const auto& h : null_space(gauge).null_space_basis) {
    prob.quotient_directions.push_back(hermitian_coordinates(h.entries()));
  }

  BallResult ball = maximize_over_gauge_ball(prob, opts);
  DistanceResult result;
  result.cut_history = std::move(ball.cut_history);
  if (ball.status == BallStatus::Unbounded) {
    result.value = kInf;
    if (ball.unbounded_direction) {
      result.witness_element =
          HermitianElement(hermitian_from_coordinates(n, *ball.unbounded_direction));
    }
    return result;
  }
  result.value = ball.value;
  result.certified_gap = ball.certified_gap;
  result.certified = ball.status == BallStatus::Certified;
  result.witness_element =
      HermitianElement(hermitian_from_coordinates(n, ball.maximizer));
  return result;
}

DistanceResult context_distance(const LipGauge& gauge,
                                const CommutativeContext& alpha,
                                const ProbVector& mu_a, const ProbVector& nu_a,
                                const BallOptions& opts) {
  const int k = alpha.block_count();
  if (mu_a.arity() != k || nu_a.arity() != k) {
    throw ValidationError("ArityMismatch",
                          "marginal arity does not match context");
  }
  Vector c = mu_a.p() - nu_a.p();
  RestrictedGauge rg = restrict_gauge(gauge, alpha);
  DistanceResult result;

  switch (rg.kind()) {
    case RestrictedGauge::Kind::ConstantsOnly: {
      // only constants are feasible; they pair to zero with mu - nu
      result.witness_vector = Vector::Zero(k);
      return result;
    }
    case RestrictedGauge::Kind::Polyhedral: {
      LinearProgram lp = LinearProgram::make(k);
      lp.objective = c;
      lp.lower = Vector::Constant(k, -kInf);
      lp.upper = Vector::Constant(k, kInf);
      for (const auto& pr : rg.pairs()) {
        Vector row = Vector::Zero(k);
        row(pr.i) = 1.0;
        row(pr.j) = -1.0;
        lp.add_row(row, Relation::LessEq, pr.d);
        lp.add_row(-row, Relation::LessEq, pr.d);
      }
      Vector pin = Vector::Zero(k);
      pin(0) = 1.0;
      lp.add_row(pin, Relation::Equal, 0.0);

      LpSolution sol = solve_lp(lp);
      if (sol.status == LpStatus::Unbounded) {
        result.value = kInf;
        return result;
      }
      if (sol.status != LpStatus::Optimal) {
        throw NumericalError("NumericalFailure", "context distance LP failed");
      }
      result.value = sol.value;
      result.certified_gap = 1e-12 * (1.0 + std::abs(sol.value));
      result.witness_vector = sol.primal;
      return result;
    }
    case RestrictedGauge::Kind::Spectral: {
      BallMaximization prob;
      prob.objective = c;
      for (const auto& row : rg.maps()) prob.constraint_maps.push_back(row);
      prob.quotient_directions.push_back(Vector::Ones(k));

      BallResult ball = maximize_over_gauge_ball(prob, opts);
      result.cut_history = std::move(ball.cut_history);
      if (ball.status == BallStatus::Unbounded) {
        result.value = kInf;
        result.witness_vector = ball.unbounded_direction;
        return result;
      }
      result.value = ball.value;
      result.certified_gap = ball.certified_gap;
      result.certified = ball.status == BallStatus::Certified;
      result.witness_vector = ball.maximizer;
      return result;
    }
  }
  return result;
}

PointMetricResult context_point_metric(const LipGauge& gauge,
                                       const CommutativeContext& alpha,
                                       const BallOptions& opts) {
  const int k = alpha.block_count();
  RealMatrix dist = RealMatrix::Zero(k, k);
  RealMatrix gaps = RealMatrix::Zero(k, k);
  bool certified = true;

  for (int i = 0; i < k; ++i) {
    for (int j = i + 1; j < k; ++j) {
      Vector pi = Vector::Zero(k), pj = Vector::Zero(k);
      pi(i) = 1.0;
      pj(j) = 1.0;
      DistanceResult d =
          context_distance(gauge, alpha, ProbVector(pi), ProbVector(pj), opts);
      dist(i, j) = dist(j, i) = d.value;
      gaps(i, j) = gaps(j, i) = d.certified_gap;
      certified = certified && d.certified;
    }
  }

  // the analytic object is a pseudo-distance; a triangle violation beyond
  // the certified gaps means the solver tolerance was too loose
  double worst = 0.0;
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      for (int l = 0; l < k; ++l) {
        double slack = gaps(i, j) + gaps(i, l) + gaps(l, j) + 1e-9;
        double excess = dist(i, j) - (dist(i, l) + dist(l, j));
        if (excess > slack) {
          std::ostringstream os;
          os << "point metric violates triangle inequality by " << excess
             << " at (" << i << "," << j << "," << l << "); retry with tighter tol";
          throw NumericalError("MetricViolation", os.str());
        }
        if (std::isfinite(excess)) worst = std::max(worst, excess);
      }
    }
  }

  PointMetricResult result{FiniteMetricSpace(dist, std::max(worst, 1e-9) + 1e-12),
                           gaps, false, false, certified};
  result.pseudo = result.space.pseudo();
  result.extended = result.space.extended();
  return result;
}

DiameterResult diameter(const LipGauge& gauge,
                        const std::vector<CommutativeContext>& contexts,
                        const BallOptions& opts) {
  DiameterResult result;
  for (const auto& alpha : contexts) {
    if (!alpha.is_maximal()) {
      throw ValidationError("NonMaximalContext",
                            "diameter requires maximal contexts");
    }
    PointMetricResult pm = context_point_metric(gauge, alpha, opts);
    double diam = 0.0;
    for (int i = 0; i < pm.space.points(); ++i) {
      for (int j = i + 1; j < pm.space.points(); ++j) {
        diam = std::max(diam, pm.space.dist()(i, j));
      }
    }
    result.per_context.push_back(diam);
    result.max = std::max(result.max, diam);
  }
  return result;
}

}  // namespace ncwass
