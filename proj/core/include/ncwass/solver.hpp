#pragma once

#include <optional>
#include <vector>

#include "ncwass/common.hpp"

namespace ncwass {

enum class Relation { LessEq, Equal, GreaterEq };

// Maximize objective . x subject to rows and per-variable bounds.
// Default bounds are x >= 0; set lower(j) = -inf for a free variable.
struct LinearProgram {
  Vector objective;
  struct Row {
    Vector coeffs;
    Relation rel;
    double rhs;
  };
  std::vector<Row> rows;
  Vector lower;
  Vector upper;

  static LinearProgram make(int nvars) {
    LinearProgram lp;
    lp.objective = Vector::Zero(nvars);
    lp.lower = Vector::Zero(nvars);
    lp.upper = Vector::Constant(nvars, kInf);
    return lp;
  }
  int nvars() const { return static_cast<int>(objective.size()); }
  void add_row(const Vector& coeffs, Relation rel, double rhs) {
    rows.push_back({coeffs, rel, rhs});
  }
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpSolution {
  LpStatus status = LpStatus::Optimal;
  double value = 0.0;
  Vector primal;
  Vector dual;  // one multiplier per row of the input program
  int pivots = 0;
};

// Dense two-phase tableau simplex. Deterministic pivoting (lowest-index
// tie-breaking, Bland's rule as anti-cycling fallback). Throws
// NumericalError("NumericalFailure") after 10*(vars+constraints)^2 pivots.
LpSolution solve_lp(const LinearProgram& lp);

// sup { objective . v : max_k ||M_k(v)|| <= 1 } for linear matrix-valued
// constraint maps M_k. constraint_maps[k][j] is the image M_k(e_j) of the
// j-th basis vector. quotient_directions span directions on which the
// objective and all constraints are invariant (the gauge null space); the
// objective must vanish on them, otherwise the supremum is +infinity.
struct BallMaximization {
  Vector objective;
  std::vector<std::vector<Matrix>> constraint_maps;
  std::vector<Vector> quotient_directions;
};

enum class BallStatus { Certified, CutLimitExceeded, Unbounded };

struct CutRecord {
  int iteration;
  int map_index;
  double norm;         // constraint norm at the LP candidate
  double upper_bound;  // LP relaxation value at this iteration
};

struct BallOptions {
  int max_cuts = 500;
  double tol = 1e-7;
  bool record_cuts = false;
};

struct BallResult {
  BallStatus status = BallStatus::Certified;
  double value = 0.0;        // best feasible value (a true lower bound)
  double upper_bound = 0.0;  // LP relaxation bound
  double certified_gap = 0.0;
  Vector maximizer;
  std::optional<Vector> unbounded_direction;
  int cuts_used = 0;
  std::vector<CutRecord> cut_history;
};

// Kelley cutting-plane maximization over the spectral-norm gauge ball.
BallResult maximize_over_gauge_ball(const BallMaximization& prob,
                                    const BallOptions& opts = {});

}  // namespace ncwass
