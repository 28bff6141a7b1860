#pragma once

#include <optional>
#include <vector>

#include "ncwass/algebra.hpp"
#include "ncwass/common.hpp"

namespace ncwass {

// Finite (possibly extended, possibly pseudo) metric space on k points.
// Off-diagonal zeros are permitted and flagged; +infinity entries mark
// unreachable pairs.
class FiniteMetricSpace {
 public:
  explicit FiniteMetricSpace(RealMatrix dist,
                             double tri_tol = tol::metric_triangle);
  int points() const { return static_cast<int>(dist_.rows()); }
  const RealMatrix& dist() const { return dist_; }
  bool pseudo() const { return pseudo_; }
  bool extended() const { return extended_; }

 private:
  RealMatrix dist_;
  bool pseudo_ = false;
  bool extended_ = false;
};

// Transport plan with prescribed marginals.
class Coupling {
 public:
  Coupling(RealMatrix pi, const ProbVector& mu, const ProbVector& nu,
           double tolerance = 1e-10);
  int arity() const { return static_cast<int>(pi_.rows()); }
  const RealMatrix& pi() const { return pi_; }
  ProbVector row_marginal() const;
  ProbVector col_marginal() const;

 private:
  RealMatrix pi_;
};

struct TransportResult {
  double value = 0.0;  // +infinity when every coupling uses an infinite route
  std::optional<Coupling> coupling;
};

// Exact L^p-Wasserstein distance via the transport LP, p in [1, 64].
// Costs d^p are evaluated in log space for p >= 8.
TransportResult wasserstein_p(const FiniteMetricSpace& space, double p,
                              const ProbVector& mu, const ProbVector& nu);

struct DualResult {
  double value = 0.0;
  Vector potential;  // maximizing potential, normalized f_1 = 0
};

// Kantorovich-Rubinstein dual LP:
// max sum_i f_i (mu_i - nu_i)  s.t.  |f_i - f_j| <= d(i, j).
DualResult kantorovich_dual(const FiniteMetricSpace& space, const ProbVector& mu,
                            const ProbVector& nu);

// |primal W_1 - dual value|; contract: <= 1e-8 * (1 + value).
double duality_gap(const FiniteMetricSpace& space, const ProbVector& mu,
                   const ProbVector& nu);

// Three-marginal array from gluing two couplings along their shared marginal.
class ThreeCoupling {
 public:
  explicit ThreeCoupling(int k) : k_(k), data_(k * k * k, 0.0) {}
  int arity() const { return k_; }
  double& at(int i, int j, int l) { return data_[(i * k_ + j) * k_ + l]; }
  double at(int i, int j, int l) const { return data_[(i * k_ + j) * k_ + l]; }
  RealMatrix project_12() const;
  RealMatrix project_23() const;
  RealMatrix project_13() const;

 private:
  int k_;
  std::vector<double> data_;
};

// gamma_{ijl} = pi1_{ij} pi2_{jl} / nu_j (0 where nu_j = 0); the projections
// onto (1,2) and (2,3) recover pi1 and pi2.
ThreeCoupling glue_couplings(const Coupling& pi1, const Coupling& pi2);

}  // namespace ncwass
