#include "ncwass/transport.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ncwass/errors.hpp"
#include "ncwass/solver.hpp"

namespace ncwass {

FiniteMetricSpace::FiniteMetricSpace(RealMatrix dist, double tri_tol)
    : dist_(std::move(dist)) {
  const int k = points();
  if (dist_.cols() != k || k < 1) {
    throw ValidationError("BadMetric", "distance matrix must be square");
  }
  for (int i = 0; i < k; ++i) {
    if (dist_(i, i) != 0.0) {
      throw ValidationError("BadMetric", "distance diagonal must be zero");
    }
    for (int j = 0; j < k; ++j) {
      if (std::isnan(dist_(i, j))) {
        throw ValidationError("BadMetric", "distance entries must not be NaN");
      }
      if (dist_(i, j) != dist_(j, i)) {
        throw ValidationError("BadMetric", "distance matrix must be symmetric");
      }
      if (dist_(i, j) < 0.0) {
        throw ValidationError("BadMetric", "distances must be nonnegative");
      }
      if (i != j && dist_(i, j) == 0.0) pseudo_ = true;
      if (is_infinite(dist_(i, j))) extended_ = true;
    }
  }
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      for (int l = 0; l < k; ++l) {
        double via = dist_(i, l) + dist_(l, j);  // inf-aware
        if (dist_(i, j) > via + tri_tol) {
          std::ostringstream os;
          os << "triangle inequality fails at (" << i << "," << j << "," << l
             << ")";
          throw ValidationError("BadMetric", os.str());
        }
      }
    }
  }
}

Coupling::Coupling(RealMatrix pi, const ProbVector& mu, const ProbVector& nu,
                   double tolerance)
    : pi_(std::move(pi)) {
  const int k = arity();
  if (pi_.cols() != k || mu.arity() != k || nu.arity() != k) {
    throw ValidationError("ArityMismatch", "coupling arity mismatch");
  }
  if (pi_.minCoeff() < -tolerance) {
    throw ValidationError("NotPositive", "coupling entries must be nonnegative");
  }
  double row_err = (pi_.rowwise().sum() - mu.p()).cwiseAbs().maxCoeff();
  double col_err = (pi_.colwise().sum().transpose() - nu.p()).cwiseAbs().maxCoeff();
  if (row_err > tolerance || col_err > tolerance) {
    std::ostringstream os;
    os << "coupling marginals off by " << std::max(row_err, col_err);
    throw ValidationError("MarginalMismatch", os.str());
  }
  pi_ = pi_.cwiseMax(0.0);
}

ProbVector Coupling::row_marginal() const { return ProbVector(pi_.rowwise().sum()); }
ProbVector Coupling::col_marginal() const {
  return ProbVector(pi_.colwise().sum().transpose());
}

namespace {

double pow_cost(double ratio, double p) {
  // ratio in [0, 1]; log-space evaluation avoids overflow for large p
  if (ratio <= 0.0) return 0.0;
  if (p < 8.0) return std::pow(ratio, p);
  return std::exp(p * std::log(ratio));
}

}  // namespace

TransportResult wasserstein_p(const FiniteMetricSpace& space, double p,
                              const ProbVector& mu, const ProbVector& nu) {
  const int k = space.points();
  if (mu.arity() != k || nu.arity() != k) {
    throw ValidationError("ArityMismatch",
                          "marginal arity does not match metric space");
  }
  if (!(p >= 1.0) || !(p <= 64.0)) {
    throw ValidationError("BadExponent", "p must lie in [1, 64]");
  }

  // forced-infinite short circuit: a marginal atom whose every finite-cost
  // route leads to zero mass
  for (int i = 0; i < k; ++i) {
    if (mu[i] <= 0.0) continue;
    bool reachable = false;
    for (int j = 0; j < k && !reachable; ++j) {
      reachable = nu[j] > 0.0 && !is_infinite(space.dist()(i, j));
    }
    if (!reachable) return {kInf, std::nullopt};
  }
  for (int j = 0; j < k; ++j) {
    if (nu[j] <= 0.0) continue;
    bool reachable = false;
    for (int i = 0; i < k && !reachable; ++i) {
      reachable = mu[i] > 0.0 && !is_infinite(space.dist()(i, j));
    }
    if (!reachable) return {kInf, std::nullopt};
  }

  // normalize by the largest finite distance so p-th powers stay in [0, 1]
  double dmax = 0.0;
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      if (!is_infinite(space.dist()(i, j))) dmax = std::max(dmax, space.dist()(i, j));
    }
  }

  // active transport cells: positive-mass endpoints, finite cost
  struct Cell {
    int i, j;
    double cost;
  };
  std::vector<Cell> cells;
  std::vector<int> rows_active, cols_active;
  std::vector<int> row_index(k, -1), col_index(k, -1);
  for (int i = 0; i < k; ++i) {
    if (mu[i] > 0.0) {
      row_index[i] = static_cast<int>(rows_active.size());
      rows_active.push_back(i);
    }
  }
  for (int j = 0; j < k; ++j) {
    if (nu[j] > 0.0) {
      col_index[j] = static_cast<int>(cols_active.size());
      cols_active.push_back(j);
    }
  }
  for (int i : rows_active) {
    for (int j : cols_active) {
      double d = space.dist()(i, j);
      if (is_infinite(d)) continue;
      double ratio = dmax > 0.0 ? d / dmax : 0.0;
      cells.push_back({i, j, pow_cost(ratio, p)});
    }
  }

  const int nv = static_cast<int>(cells.size());
  LinearProgram lp = LinearProgram::make(nv);
  for (int c = 0; c < nv; ++c) lp.objective(c) = -cells[c].cost;  // minimize
  for (size_t r = 0; r < rows_active.size(); ++r) {
    Vector row = Vector::Zero(nv);
    for (int c = 0; c < nv; ++c) {
      if (cells[c].i == rows_active[r]) row(c) = 1.0;
    }
    lp.add_row(row, Relation::Equal, mu[rows_active[r]]);
  }
  for (size_t cidx = 0; cidx < cols_active.size(); ++cidx) {
    Vector row = Vector::Zero(nv);
    for (int c = 0; c < nv; ++c) {
      if (cells[c].j == cols_active[cidx]) row(c) = 1.0;
    }
    lp.add_row(row, Relation::Equal, nu[cols_active[cidx]]);
  }

  LpSolution sol = solve_lp(lp);
  if (sol.status == LpStatus::Infeasible) {
    // every coupling is forced through an infinite-cost route
    return {kInf, std::nullopt};
  }
  if (sol.status != LpStatus::Optimal) {
    throw NumericalError("NumericalFailure", "transport LP did not solve");
  }

  RealMatrix pi = RealMatrix::Zero(k, k);
  for (int c = 0; c < nv; ++c) {
    pi(cells[c].i, cells[c].j) = std::max(0.0, sol.primal(c));
  }
  double scaled = std::max(0.0, -sol.value);  // sum of (d/dmax)^p pi
  double value = 0.0;
  if (scaled > 0.0 && dmax > 0.0) {
    value = dmax * std::exp(std::log(scaled) / p);
  }
  return {value, Coupling(pi, mu, nu)};
}

DualResult kantorovich_dual(const FiniteMetricSpace& space, const ProbVector& mu,
                            const ProbVector& nu) {
  const int k = space.points();
  if (mu.arity() != k || nu.arity() != k) {
    throw ValidationError("ArityMismatch",
                          "marginal arity does not match metric space");
  }
  if (space.extended()) {
    throw ValidationError("BadMetric",
                          "Kantorovich dual requires a finite metric");
  }

  LinearProgram lp = LinearProgram::make(k);
  lp.objective = mu.p() - nu.p();
  lp.lower = Vector::Constant(k, -kInf);
  lp.upper = Vector::Constant(k, kInf);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      if (i == j) continue;
      Vector row = Vector::Zero(k);
      row(i) = 1.0;
      row(j) = -1.0;
      lp.add_row(row, Relation::LessEq, space.dist()(i, j));
    }
  }
  {
    // objective is shift-invariant (marginals share total mass); pin f_1 = 0
    Vector row = Vector::Zero(k);
    row(0) = 1.0;
    lp.add_row(row, Relation::Equal, 0.0);
  }

  LpSolution sol = solve_lp(lp);
  if (sol.status != LpStatus::Optimal) {
    throw NumericalError("NumericalFailure", "Kantorovich dual LP did not solve");
  }
  return {sol.value, sol.primal};
}

double duality_gap(const FiniteMetricSpace& space, const ProbVector& mu,
                   const ProbVector& nu) {
  double primal = wasserstein_p(space, 1.0, mu, nu).value;
  double dual = kantorovich_dual(space, mu, nu).value;
  return std::abs(primal - dual);
}

RealMatrix ThreeCoupling::project_12() const {
  RealMatrix out = RealMatrix::Zero(k_, k_);
  for (int i = 0; i < k_; ++i) {
    for (int j = 0; j < k_; ++j) {
      for (int l = 0; l < k_; ++l) out(i, j) += at(i, j, l);
    }
  }
  return out;
}

RealMatrix ThreeCoupling::project_23() const {
  RealMatrix out = RealMatrix::Zero(k_, k_);
  for (int i = 0; i < k_; ++i) {
    for (int j = 0; j < k_; ++j) {
      for (int l = 0; l < k_; ++l) out(j, l) += at(i, j, l);
    }
  }
  return out;
}

RealMatrix ThreeCoupling::project_13() const {
  RealMatrix out = RealMatrix::Zero(k_, k_);
  for (int i = 0; i < k_; ++i) {
    for (int j = 0; j < k_; ++j) {
      for (int l = 0; l < k_; ++l) out(i, l) += at(i, j, l);
    }
  }
  return out;
}

ThreeCoupling glue_couplings(const Coupling& pi1, const Coupling& pi2) {
  if (pi1.arity() != pi2.arity()) {
    throw ValidationError("ArityMismatch", "couplings have different arities");
  }
  const int k = pi1.arity();
  Vector middle1 = pi1.pi().colwise().sum().transpose();
  Vector middle2 = pi2.pi().rowwise().sum();
  if ((middle1 - middle2).cwiseAbs().maxCoeff() > 1e-10) {
    throw ValidationError("MarginalMismatch",
                          "middle marginals of the couplings disagree");
  }
  ThreeCoupling gamma(k);
  for (int j = 0; j < k; ++j) {
    double nu_j = middle1(j);
    if (nu_j <= 0.0) continue;
    for (int i = 0; i < k; ++i) {
      double a = pi1.pi()(i, j);
      if (a <= 0.0) continue;
      for (int l = 0; l < k; ++l) {
        double b = pi2.pi()(j, l);
        if (b > 0.0) gamma.at(i, j, l) = a * b / nu_j;
      }
    }
  }
  return gamma;
}

}  // namespace ncwass
