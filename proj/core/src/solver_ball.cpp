#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

#include "ncwass/errors.hpp"
#include "ncwass/solver.hpp"

namespace ncwass {

namespace {

constexpr double kRcTol = 1e-9;
constexpr double kPivTol = 1e-11;

// Incremental LP specialized to the Kelley loop:
//   maximize c.v   s.t.  |v_j| <= box,  E v = 0,  cuts a.v <= rhs.
// Internally u = v + box*1 >= 0 with cap rows u_j <= 2*box. Cuts arrive one
// at a time; after the first solve each addition is repaired by dual simplex
// steps from the previous optimal basis instead of a fresh solve.
class CutLp {
 public:
  CutLp(const Vector& objective, double box, const std::vector<Vector>& equalities)
      : m_(static_cast<int>(objective.size())),
        ne_(static_cast<int>(equalities.size())),
        box_(box) {
    const int rows0 = m_ + ne_ + 16;
    const int cols0 = m_ + m_ + ne_ + 16;  // u, cap slacks, arts, cut slacks
    tab_ = RealMatrix::Zero(rows0, cols0);
    rhs_ = Vector::Zero(rows0);
    cost_ = Vector::Zero(cols0);
    rc_ = Vector::Zero(cols0);
    basis_.assign(rows0, -1);
    cost_.head(m_) = objective;

    rows_ = 0;
    cols_ = m_;
    // cap rows: u_j + s_j = 2 box
    for (int j = 0; j < m_; ++j) {
      int s = cols_++;
      tab_(rows_, j) = 1.0;
      tab_(rows_, s) = 1.0;
      rhs_(rows_) = 2.0 * box_;
      basis_[rows_] = s;
      ++rows_;
    }
    // equality rows q.u = box * sum(q), artificials basic
    first_art_ = cols_;
    for (const auto& q : equalities) {
      double b = box_ * q.sum();
      Vector row = q;
      if (b < 0) {
        row = -row;
        b = -b;
      }
      int a = cols_++;
      tab_.row(rows_).head(m_) = row.transpose();
      tab_(rows_, a) = 1.0;
      rhs_(rows_) = b;
      basis_[rows_] = a;
      is_art_.push_back(a);
      ++rows_;
    }
    solve_from_scratch();
  }

  // a.v <= rhs in the original variables
  void add_cut(const Vector& coeffs, double rhs) {
    if (rows_ + 1 > tab_.rows() || cols_ + 1 > tab_.cols()) {
      grow();
    }
    int row = rows_++;
    int slack = cols_++;
    tab_.row(row).setZero();
    tab_.row(row).head(m_) = coeffs.transpose();
    tab_(row, slack) = 1.0;
    rhs_(row) = rhs + box_ * coeffs.sum();
    basis_[row] = slack;

    // express the new row in the current basis
    for (int i = 0; i < row; ++i) {
      double f = tab_(row, basis_[i]);
      if (f != 0.0) {
        tab_.row(row).head(cols_) -= f * tab_.row(i).head(cols_);
        rhs_(row) -= f * rhs_(i);
      }
    }
    dual_repair();
  }

  double value() const {
    double v = 0.0;
    for (int i = 0; i < rows_; ++i) {
      if (basis_[i] < m_) v += cost_(basis_[i]) * rhs_(i);
    }
    return v - box_ * cost_.head(m_).sum();
  }

  Vector primal() const {
    Vector u = Vector::Zero(m_);
    for (int i = 0; i < rows_; ++i) {
      if (basis_[i] < m_) u(basis_[i]) = rhs_(i);
    }
    return u.array() - box_;
  }

 private:
  void grow() {
    const long new_rows = tab_.rows() * 2;
    const long new_cols = tab_.cols() * 2;
    tab_.conservativeResize(new_rows, new_cols);
    tab_.rightCols(new_cols - cols_).setZero();
    tab_.bottomRows(new_rows - rows_).setZero();
    rhs_.conservativeResize(new_rows);
    rhs_.tail(new_rows - rows_).setZero();
    cost_.conservativeResize(new_cols);
    cost_.tail(new_cols - cols_).setZero();
    rc_.conservativeResize(new_cols);
    rc_.tail(new_cols - cols_).setZero();
    basis_.resize(new_rows, -1);
  }

  void pivot(int row, int col) {
    double p = tab_(row, col);
    tab_.row(row).head(cols_) /= p;
    rhs_(row) /= p;
    for (int i = 0; i < rows_; ++i) {
      if (i == row) continue;
      double f = tab_(i, col);
      if (f != 0.0) {
        tab_.row(i).head(cols_) -= f * tab_.row(row).head(cols_);
        rhs_(i) -= f * rhs_(row);
        tab_(i, col) = 0.0;
      }
    }
    double f = rc_(col);
    if (f != 0.0) {
      rc_.head(cols_) -= f * tab_.row(row).head(cols_).transpose();
      rc_(col) = 0.0;
    }
    basis_[row] = col;
    if (++pivots_ > 200000) {
      throw NumericalError("NumericalFailure", "incremental LP pivot limit");
    }
  }

  void compute_reduced_costs(bool phase1) {
    rc_.head(cols_).setZero();
    if (phase1) {
      for (int a : is_art_) rc_(a) = -1.0;
    } else {
      rc_.head(m_) = cost_.head(m_);
    }
    for (int i = 0; i < rows_; ++i) {
      double cb = phase1 ? (is_artificial(basis_[i]) ? -1.0 : 0.0)
                         : (basis_[i] < m_ ? cost_(basis_[i]) : 0.0);
      if (cb != 0.0) rc_.head(cols_) -= cb * tab_.row(i).head(cols_).transpose();
    }
  }

  bool is_artificial(int col) const {
    for (int a : is_art_) {
      if (a == col) return true;
    }
    return false;
  }

  // primal simplex to optimality on the current reduced costs
  void primal_iterate(bool phase1) {
    int degenerate = 0;
    bool bland = false;
    while (true) {
      int enter = -1;
      if (!bland) {
        double best = kRcTol;
        for (int j = 0; j < cols_; ++j) {
          if (!phase1 && is_artificial(j)) continue;
          if (rc_(j) > best) {
            best = rc_(j);
            enter = j;
          }
        }
      } else {
        for (int j = 0; j < cols_; ++j) {
          if (!phase1 && is_artificial(j)) continue;
          if (rc_(j) > kRcTol) {
            enter = j;
            break;
          }
        }
      }
      if (enter < 0) return;

      int leave = -1;
      double best_ratio = kInf;
      for (int i = 0; i < rows_; ++i) {
        double a = tab_(i, enter);
        if (a > kPivTol) {
          double ratio = rhs_(i) / a;
          if (ratio < best_ratio - 1e-12 ||
              (ratio < best_ratio + 1e-12 && leave >= 0 &&
               basis_[i] < basis_[leave])) {
            best_ratio = ratio;
            leave = i;
          }
        }
      }
      if (leave < 0) {
        throw NumericalError("NumericalFailure",
                             "cut relaxation unbounded despite box rows");
      }
      if (best_ratio < 1e-12) {
        if (++degenerate > 50) bland = true;
      } else {
        degenerate = 0;
        bland = false;
      }
      pivot(leave, enter);
    }
  }

  void solve_from_scratch() {
    if (!is_art_.empty()) {
      compute_reduced_costs(/*phase1=*/true);
      primal_iterate(/*phase1=*/true);
      double infeas = 0.0;
      for (int i = 0; i < rows_; ++i) {
        if (is_artificial(basis_[i])) infeas += rhs_(i);
      }
      if (infeas > 1e-9) {
        throw NumericalError("NumericalFailure",
                             "cut relaxation infeasible (equalities)");
      }
      for (int i = 0; i < rows_; ++i) {
        if (!is_artificial(basis_[i])) continue;
        int enter = -1;
        for (int j = 0; j < cols_ && enter < 0; ++j) {
          if (!is_artificial(j) && std::abs(tab_(i, j)) > kPivTol) enter = j;
        }
        if (enter >= 0) pivot(i, enter);
        // a fully dependent equality row stays parked on its artificial at 0
      }
    }
    compute_reduced_costs(/*phase1=*/false);
    primal_iterate(/*phase1=*/false);
  }

  // restore primal feasibility after appending a violated row
  void dual_repair() {
    while (true) {
      int leave = -1;
      double worst = -1e-9;
      for (int i = 0; i < rows_; ++i) {
        if (rhs_(i) < worst) {
          worst = rhs_(i);
          leave = i;
        }
      }
      if (leave < 0) break;

      int enter = -1;
      double best_ratio = kInf;
      for (int j = 0; j < cols_; ++j) {
        if (is_artificial(j)) continue;
        double a = tab_(leave, j);
        if (a < -kPivTol) {
          double ratio = rc_(j) / a;  // rc <= 0, a < 0: ratio >= 0
          if (ratio < best_ratio - 1e-12 ||
              (ratio < best_ratio + 1e-12 && enter >= 0 && j < enter)) {
            best_ratio = ratio;
            enter = j;
          }
        }
      }
      if (enter < 0) {
        throw NumericalError("NumericalFailure",
                             "dual repair found the relaxation infeasible");
      }
      pivot(leave, enter);
    }
    primal_iterate(/*phase1=*/false);  // mop up any reduced-cost drift
  }

  int m_;
  int ne_;
  double box_;
  int rows_ = 0;
  int cols_ = 0;
  int first_art_ = 0;
  long pivots_ = 0;
  RealMatrix tab_;
  Vector rhs_;
  Vector cost_;
  Vector rc_;
  std::vector<int> basis_;
  std::vector<int> is_art_;
};

// Real stacking of all constraint maps: column j holds the concatenated
// real and imaginary parts of every M_k(e_j).
RealMatrix stack_maps(const BallMaximization& prob) {
  const int m = static_cast<int>(prob.objective.size());
  long rows = 0;
  for (const auto& maps : prob.constraint_maps) {
    if (static_cast<int>(maps.size()) != m) {
      throw ValidationError("DimensionMismatch",
                            "constraint map arity does not match objective");
    }
    if (!maps.empty()) rows += 2 * maps[0].rows() * maps[0].cols();
  }
  RealMatrix t = RealMatrix::Zero(std::max<long>(rows, 1), m);
  for (int j = 0; j < m; ++j) {
    long at = 0;
    for (const auto& maps : prob.constraint_maps) {
      const Matrix& mk = maps[j];
      for (int c = 0; c < mk.cols(); ++c) {
        for (int r = 0; r < mk.rows(); ++r) {
          t(at++, j) = mk(r, c).real();
          t(at++, j) = mk(r, c).imag();
        }
      }
    }
  }
  return t;
}

Matrix apply_map(const std::vector<Matrix>& maps, const Vector& v) {
  Matrix out = Matrix::Zero(maps[0].rows(), maps[0].cols());
  for (int j = 0; j < static_cast<int>(maps.size()); ++j) {
    if (v(j) != 0.0) out += v(j) * maps[j];
  }
  return out;
}

}  // namespace

BallResult maximize_over_gauge_ball(const BallMaximization& prob,
                                    const BallOptions& opts) {
  const int m = static_cast<int>(prob.objective.size());
  BallResult result;
  result.maximizer = Vector::Zero(m);

  if (prob.objective.cwiseAbs().maxCoeff() == 0.0) {
    return result;  // zero objective: value 0, empty certificate
  }
  if (prob.constraint_maps.empty()) {
    result.status = BallStatus::Unbounded;
    result.value = kInf;
    result.upper_bound = kInf;
    result.unbounded_direction = prob.objective.normalized();
    return result;
  }

  // invariant: the objective vanishes on the declared quotient directions
  for (const auto& q : prob.quotient_directions) {
    double qn = q.norm();
    if (qn == 0.0) continue;
    if (std::abs(prob.objective.dot(q)) / qn >
        1e-10 * (1.0 + prob.objective.norm())) {
      result.status = BallStatus::Unbounded;
      result.value = kInf;
      result.upper_bound = kInf;
      result.unbounded_direction = q / qn;
      return result;
    }
  }

  // null space of the stacked constraints; directions the ball does not see
  RealMatrix t = stack_maps(prob);
  Eigen::BDCSVD<RealMatrix> svd(t, Eigen::ComputeThinV);
  const Vector& sv = svd.singularValues();
  double smax = sv.size() > 0 ? sv(0) : 0.0;
  double null_cut = std::max(1e-12 * smax, 1e-14);
  int rank = 0;
  while (rank < sv.size() && sv(rank) > null_cut) ++rank;
  double sigma_min = rank > 0 ? sv(rank - 1) : 0.0;

  std::vector<Vector> null_basis;
  for (int j = rank; j < svd.matrixV().cols(); ++j) {
    null_basis.push_back(svd.matrixV().col(j));
  }
  // if the constraints vanish on a direction with nonzero objective, the
  // supremum is genuinely infinite (pseudo-distance case)
  for (const auto& q : null_basis) {
    if (std::abs(prob.objective.dot(q)) > 1e-9 * (1.0 + prob.objective.norm())) {
      result.status = BallStatus::Unbounded;
      result.value = kInf;
      result.upper_bound = kInf;
      result.unbounded_direction = q;
      return result;
    }
  }
  if (rank == 0) {
    // constraints identically zero but objective orthogonal to everything:
    // objective must be ~0; treat as zero
    return result;
  }

  // a-priori box bound on the quotient complement; sqrt(sum_k n_k) covers
  // the worst-case Frobenius/operator gap, 10 is the spec envelope
  double frob_gap = 0.0;
  for (const auto& maps : prob.constraint_maps) {
    frob_gap += static_cast<double>(std::min(maps[0].rows(), maps[0].cols()));
  }
  const double box = std::max(10.0, std::sqrt(frob_gap)) / sigma_min;

  const int n_maps = static_cast<int>(prob.constraint_maps.size());

  // seed the relaxation with supporting planes along the coordinate and
  // objective directions: tangent to the unit ball, so the first LP already
  // sees a coarse outer polytope
  std::vector<std::pair<Vector, double>> seed_cuts;
  {
    std::vector<Vector> probes;
    for (int j = 0; j < m; ++j) probes.push_back(Vector::Unit(m, j));
    probes.push_back(prob.objective.normalized());
    for (int k = 0; k < n_maps; ++k) {
      for (const auto& probe : probes) {
        TopSingular ts = top_singular(apply_map(prob.constraint_maps[k], probe));
        if (ts.sigma < 1e-12) continue;
        Vector cut(m);
        for (int j = 0; j < m; ++j) {
          cut(j) = (ts.left.adjoint() * prob.constraint_maps[k][j] * ts.right)(0)
                       .real();
        }
        seed_cuts.emplace_back(cut, 1.0);
        seed_cuts.emplace_back(-cut, 1.0);
      }
    }
  }

  CutLp lp(prob.objective, box, null_basis);
  for (const auto& [cut, rhs] : seed_cuts) lp.add_cut(cut, rhs);

  double best_feasible = 0.0;
  Vector best_v = Vector::Zero(m);
  double upper = kInf;

  for (int iter = 0; iter < opts.max_cuts; ++iter) {
    upper = lp.value();
    Vector candidate = lp.primal();

    // worst constraint at the candidate
    double s = 0.0;
    int worst = 0;
    TopSingular worst_pair{0.0, {}, {}};
    for (int k = 0; k < n_maps; ++k) {
      TopSingular ts = top_singular(apply_map(prob.constraint_maps[k], candidate));
      if (ts.sigma > s) {
        s = ts.sigma;
        worst = k;
        worst_pair = ts;
      }
    }
    if (opts.record_cuts) {
      result.cut_history.push_back({iter, worst, s, upper});
    }

    if (s <= 1.0 + opts.tol) {
      Vector v = s > 1.0 ? Vector(candidate / s) : candidate;
      double feasible = prob.objective.dot(v);
      if (feasible >= best_feasible) {
        best_feasible = feasible;
        best_v = v;
      }
      result.value = best_feasible;
      result.maximizer = best_v;
      result.upper_bound = upper;
      result.certified_gap = std::max(0.0, upper - best_feasible);
      result.cuts_used = iter;
      return result;
    }

    // rescaled candidate is always feasible; keep the best
    {
      Vector v = candidate / s;
      double feasible = prob.objective.dot(v);
      if (feasible > best_feasible) {
        best_feasible = feasible;
        best_v = v;
      }
    }

    // the certification contract is on the gap, which often closes before
    // the LP candidate itself enters the ball
    if (upper - best_feasible <= opts.tol * (1.0 + std::abs(best_feasible))) {
      result.value = best_feasible;
      result.maximizer = best_v;
      result.upper_bound = upper;
      result.certified_gap = std::max(0.0, upper - best_feasible);
      result.cuts_used = iter;
      return result;
    }

    // supporting cut Re<x, M_worst(v) y> <= 1 at the top singular pair
    Vector cut(m);
    for (int j = 0; j < m; ++j) {
      cut(j) = (worst_pair.left.adjoint() * prob.constraint_maps[worst][j] *
                worst_pair.right)(0)
                   .real();
    }
    lp.add_cut(cut, 1.0);
  }

  result.status = BallStatus::CutLimitExceeded;
  result.value = best_feasible;
  result.maximizer = best_v;
  result.upper_bound = upper;
  result.certified_gap = std::max(0.0, upper - best_feasible);
  result.cuts_used = opts.max_cuts;
  return result;
}

}  // namespace ncwass
